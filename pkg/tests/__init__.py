# antirb test suite
