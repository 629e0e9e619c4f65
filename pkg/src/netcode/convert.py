"""Turn a feasible unit-delay code into a feasible instantaneous one.

Every kernel is evaluated at one point ``z_Q`` of an extension field F_Q.
With ``g = prod_t det M'_t(z) = g_n / g_d`` and ``Q > deg g_n + deg g_d``
some nonzero point avoids all roots of ``g_n g_d``, so every sink
determinant stays nonzero; off-demand entries are identically zero and
stay zero under evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .code import NetworkCode, check_feasibility, transfer_matrices
from .errors import FieldError, InfeasibleCodeError
from .field import FieldSpec, extension_containing
from .netgraph import Network
from .polyrat import ONE, RationalFn, _evaluate_tuple, pdeg, pgcd, pmul, pexact_div


@dataclass
class Conversion:
    code: NetworkCode
    z_Q: int
    field: FieldSpec
    deg_gn: int
    deg_gd: int

    @property
    def Q(self):
        return self.field.q

    def report(self):
        return {"Q": self.Q, "field": self.field.name, "z_Q": self.z_Q, "deg_g_n": self.deg_gn, "deg_g_d": self.deg_gd}


def determinant_product(report) -> RationalFn:
    """g = prod_t g_t in sink order, reduced to lowest terms at every step."""
    F = report.field
    num, den = ONE, ONE
    for s in report.sinks:
        gn, gd = s.g.num, s.g.den
        a = pgcd(F, gn, den)
        b = pgcd(F, num, gd)
        num = pmul(F, pexact_div(F, num, b), pexact_div(F, gn, a))
        den = pmul(F, pexact_div(F, den, a), pexact_div(F, gd, b))
    return RationalFn.make(F, num, den)


def evaluate_code(c: NetworkCode, target: FieldSpec, embedding, z_Q: int) -> NetworkCode:
    kernels = {}
    for pair, k in c.kernels.items():
        num = _evaluate_tuple(c.field, k.num, z_Q, embedding)
        den = _evaluate_tuple(c.field, k.den, z_Q, embedding)
        val = (num / den).value
        if val:
            kernels[pair] = RationalFn.const(target, val)
    return NetworkCode(target, "inst", kernels)


def _good_point(c: NetworkCode, g: RationalFn, FQ, emb, x: int) -> bool:
    F = c.field
    if not _evaluate_tuple(F, g.num, x, emb) or not _evaluate_tuple(F, g.den, x, emb):
        return False
    for k in c.kernels.values():
        if not _evaluate_tuple(F, k.num, x, emb):
            return False
        if k.den != ONE and not _evaluate_tuple(F, k.den, x, emb):
            return False
    return True


def ud_to_inst(n: Network, c_ud: NetworkCode, max_growth: int = 4) -> Conversion:
    """Instantaneous code over an extension F_Q obtained by evaluating at z_Q."""
    report = transfer_matrices(n, c_ud)
    verdict = check_feasibility(report)
    if not verdict.feasible:
        raise InfeasibleCodeError(f"input code is not feasible: {verdict.describe()}")
    code = report.code  # decoders filled in where missing
    g = determinant_product(report)
    dn, dd = pdeg(g.num), pdeg(g.den)
    base = code.field
    min_size = int(dn + dd)
    for _ in range(max_growth):
        FQ, emb = extension_containing(base, min_size)
        for x in range(FQ.q):
            if _good_point(code, g, FQ, emb, x):
                out = evaluate_code(code, FQ, emb, x)
                out.validate(n)
                v = check_feasibility(transfer_matrices(n, out, complete=False))
                if not v.feasible:
                    raise InfeasibleCodeError(f"evaluation at {x} over F_{FQ.q} broke feasibility: {v.describe()}")
                return Conversion(out, x, FQ, int(dn), int(dd))
        # the kernel guards removed every point: move to a larger extension
        min_size = FQ.q
    raise FieldError("no evaluation point found below the field size cap")
