"""Residual-based verification of operator identities on basis windows."""

import logging
from itertools import combinations, combinations_with_replacement, product
from typing import Optional, Union

from models.algebra import AlgebraKind, BasisIndex, Element, bracket, central_index, sl2_basis
from models.errors import AlgebraMismatch
from models.matrix import Matrix3
from models.operator import HomogeneousOperator, IdentityKind, VerificationReport, Violation
from models.scalar import Number, Scalar

logger = logging.getLogger(__name__)

Operator = Union[HomogeneousOperator, Matrix3]

ANTI_RB_DELTA = Scalar(-1)


class VerificationService:
    """Applies operators and checks their identities on finite basis windows."""

    @staticmethod
    def operator_algebra(op: Operator) -> AlgebraKind:
        return AlgebraKind.SL2 if isinstance(op, Matrix3) else op.algebra

    @staticmethod
    def basis_window(algebra: AlgebraKind, window: int) -> list[BasisIndex]:
        """Generators with index in ``[-window, window]``, plus C for Virasoro."""
        if algebra is AlgebraKind.SL2:
            return sl2_basis()
        indices = [BasisIndex(algebra, n) for n in range(-window, window + 1)]
        if algebra is AlgebraKind.VIRASORO:
            indices.append(central_index())
        return indices

    def apply(self, op: Operator, x: Element) -> Optional[Element]:
        """Linear extension of the basis images; ``None`` if any image is unknown."""
        algebra = self.operator_algebra(op)
        if x.algebra is not algebra:
            raise AlgebraMismatch(f"operator on {algebra.value} applied to {x.algebra.value}")
        result = Element.zero(x.algebra)
        for index, coeff in x.terms:
            image = op.image(index)
            if image is None:
                return None
            result = result + image.scale(coeff)
        return result

    def delta_rb_residual(self, op: Operator, x: BasisIndex, y: BasisIndex,
                          delta: Number = ANTI_RB_DELTA) -> Optional[Element]:
        """``[Rx,Ry] - delta * R([Rx,y] + [x,Ry])``, or ``None`` when skipped."""
        delta = Scalar.of(delta)
        rx, ry = op.image(x), op.image(y)
        if rx is None or ry is None:
            return None
        inner = bracket(rx, Element.basis(y)) + bracket(Element.basis(x), ry)
        r_inner = self.apply(op, inner)
        if r_inner is None:
            return None
        return bracket(rx, ry) - r_inner.scale(delta)

    def strong_residual(self, op: Operator, x: BasisIndex, y: BasisIndex,
                        z: BasisIndex) -> Optional[Element]:
        """Cyclic sum ``[[Rx,Ry],z] + [[Ry,Rz],x] + [[Rz,Rx],y]``."""
        rx, ry, rz = op.image(x), op.image(y), op.image(z)
        if rx is None or ry is None or rz is None:
            return None
        ex, ey, ez = Element.basis(x), Element.basis(y), Element.basis(z)
        return (bracket(bracket(rx, ry), ez)
                + bracket(bracket(ry, rz), ex)
                + bracket(bracket(rz, rx), ey))

    def derivation_residual(self, op: Operator, x: BasisIndex, y: BasisIndex,
                            delta: Number = ANTI_RB_DELTA) -> Optional[Element]:
        """``d[x,y] - delta * ([dx,y] + [x,dy])``, or ``None`` when skipped."""
        delta = Scalar.of(delta)
        ex, ey = Element.basis(x), Element.basis(y)
        d_bracket = self.apply(op, bracket(ex, ey))
        dx, dy = op.image(x), op.image(y)
        if d_bracket is None or dx is None or dy is None:
            return None
        return d_bracket - (bracket(dx, ey) + bracket(ex, dy)).scale(delta)

    def verify_identity(self, op: Operator, window: int, kind: IdentityKind = IdentityKind.ANTI_RB,
                        delta: Optional[Number] = None) -> VerificationReport:
        """Check one identity on every unordered basis pair (or triple for STRONG)."""
        if window < 1:
            raise ValueError("window must be at least 1")
        if kind is IdentityKind.ANTI_RB:
            delta = ANTI_RB_DELTA
        delta = Scalar.of(delta) if delta is not None else ANTI_RB_DELTA

        basis = self.basis_window(self.operator_algebra(op), window)
        report = VerificationReport(kind=kind, window=window, delta=delta)
        for inputs in combinations_with_replacement(basis, kind.arity):
            if kind is IdentityKind.STRONG:
                residual = self.strong_residual(op, *inputs)
            elif kind is IdentityKind.DELTA_DERIVATION:
                residual = self.derivation_residual(op, *inputs, delta)
            else:
                residual = self.delta_rb_residual(op, *inputs, delta)
            if residual is None:
                report.skipped += 1
                continue
            report.checked += 1
            if not residual.is_zero:
                report.violations.append(Violation(tuple(inputs), residual))
        report.violations.sort(key=lambda v: v.inputs)
        logger.debug("%s over window %d: %s (%d checked, %d skipped)",
                     kind.value, window, report.status, report.checked, report.skipped)
        return report

    def is_graded(self, op: Operator, window: int) -> bool:
        """True iff every known in-window image lies in the degree-shifted component."""
        if isinstance(op, Matrix3):
            raise AlgebraMismatch("sl2 carries no grading")
        for index in self.basis_window(op.algebra, window):
            image = op.image(index)
            if image is None:
                continue
            target = index.grade + op.degree
            if any(i.grade != target for i in image.support()):
                return False
        return True

    def residual_antisymmetry_check(self, op: Operator, window: int,
                                    delta: Number = ANTI_RB_DELTA) -> VerificationReport:
        """Self-test: the residual at (x, y) must be minus the residual at (y, x)."""
        delta = Scalar.of(delta)
        report = VerificationReport(kind=IdentityKind.DELTA_RB, window=window, delta=delta)
        for x, y in combinations(self.basis_window(self.operator_algebra(op), window), 2):
            forward = self.delta_rb_residual(op, x, y, delta)
            backward = self.delta_rb_residual(op, y, x, delta)
            if forward is None or backward is None:
                report.skipped += 1
                continue
            report.checked += 1
            total = forward + backward
            if not total.is_zero:
                report.violations.append(Violation((x, y), total))
        report.violations.sort(key=lambda v: v.inputs)
        return report

    def check_jacobi(self, algebra: AlgebraKind, window: int) -> VerificationReport:
        """Jacobi residual on every ordered basis triple in the window."""
        if window < 1:
            raise ValueError("window must be at least 1")
        basis = self.basis_window(algebra, window)
        report = VerificationReport(kind=IdentityKind.JACOBI, window=window, delta=Scalar(0))
        for x, y, z in product(basis, repeat=3):
            ex, ey, ez = Element.basis(x), Element.basis(y), Element.basis(z)
            residual = (bracket(bracket(ex, ey), ez)
                        + bracket(bracket(ey, ez), ex)
                        + bracket(bracket(ez, ex), ey))
            report.checked += 1
            if not residual.is_zero:
                report.violations.append(Violation((x, y, z), residual))
        logger.info("Jacobi on %s window %d: %d triples, %s",
                    algebra.value, window, report.checked, report.status)
        return report
