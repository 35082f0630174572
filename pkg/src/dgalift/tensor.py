"""The evaluation map from the restricted-extended module, and its splittings.

Restrict a module to the subalgebra without the top variable, extend back
up, and evaluate: ``e_lam X^(i) (x) b  ->  e_lam X^(i) b``.  Elements of
the extended module are finite sums indexed by (basis line, variable
power); for an even variable the underlying module has infinite rank but
every element is finite, so nothing is materialized.

A lift produced by the construction pipeline yields an explicit splitting:
send each corrected basis column to itself tensor 1 and extend linearly.
For an odd variable the kernel of the evaluation is also materialized as a
finite free module, giving the whole short exact sequence with exactness
checkable degreewise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .algebra import AlgElem, diff
from .errors import SchemaError
from .jop import CheckReport
from .module import Differential, FreeModule, GradedMap, ModuleElement
from .lift import LiftResult


def split_by_powers(elem: AlgElem, var_name: str) -> dict:
    """Write an element as ``sum_i X^(i) * a_i`` with the ``a_i`` free of X.

    Returns {i: a_i}; moving an odd X out to the left crosses exactly the
    factors that precede it in canonical order, which contributes the
    usual sign.
    """
    sig = elem.sig
    field = sig.field
    pos = sig.var_pos(var_name)
    var = sig.variables[pos]
    out: dict = {}
    for (p, v), c in elem.terms.items():
        e = v[pos]
        rest = (p, v[:pos] + (0,) + v[pos + 1 :])
        if e and var.degree % 2:
            left_deg = sum(v[j] * sig.variables[j].degree for j in range(pos))
            if left_deg % 2:
                c = field.neg(c)
        bucket = out.setdefault(e, {})
        s = field.add(bucket.get(rest, field.zero), c)
        if s == field.zero:
            bucket.pop(rest, None)
        else:
            bucket[rest] = s
    return {
        i: AlgElem(sig, terms) for i, terms in out.items() if terms
    }


class TensorElement:
    """Finite sum ``sum (e_lam X^(i)) (x) b`` over (line, power) slots."""

    __slots__ = ("module", "var_name", "terms")

    def __init__(self, module: FreeModule, var_name: str, terms: dict):
        self.module = module
        self.var_name = var_name
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "TensorElement"):
        if self.module != other.module or self.var_name != other.var_name:
            raise SchemaError("tensor elements from different constructions")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return TensorElement(self.module, self.var_name, out)

    def __neg__(self):
        return TensorElement(
            self.module, self.var_name, {k: -v for k, v in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale_right(self, b: AlgElem) -> "TensorElement":
        return TensorElement(
            self.module, self.var_name, {k: v * b for k, v in self.terms.items()}
        )

    def __eq__(self, other):
        return (
            isinstance(other, TensorElement)
            and self.module == other.module
            and self.var_name == other.var_name
            and self.terms == other.terms
        )

    def __repr__(self):
        if self.is_zero():
            return "<0 (x) 0>"
        names = self.module.names
        return "<" + " + ".join(
            f"({names[lam]}{'' if i == 0 else f'.{self.var_name}^({i})'} (x) {v})"
            for (lam, i), v in sorted(self.terms.items())
        ) + ">"


class NaiveTensor:
    """The extended module for one (module, differential, variable) setting."""

    def __init__(self, module: FreeModule, d: Differential, var_name: str):
        sig = module.sig
        if not sig.is_top(var_name):
            raise SchemaError(f"{var_name!r} is not the top variable of the signature")
        if d.module != module:
            raise SchemaError("differential acts on a different module")
        self.module = module
        self.d = d
        self.var = sig.var(var_name)
        self.var_name = var_name
        self.sig = sig

    def zero(self) -> TensorElement:
        return TensorElement(self.module, self.var_name, {})

    def slot(self, lam, i: int, b: "AlgElem | str | None" = None) -> TensorElement:
        idx = lam if isinstance(lam, int) else self.module.index(lam)
        if b is None:
            b = self.sig.one()
        elif isinstance(b, str):
            b = self.sig.parse(b)
        if self.var.odd and i > 1:
            return self.zero()
        return TensorElement(self.module, self.var_name, {(idx, i): b})

    def of_module_elem(self, x: ModuleElement) -> TensorElement:
        """``x (x) 1``: split each coefficient by variable powers."""
        out: dict = {}
        for lam, c in x.coeffs.items():
            for i, a in split_by_powers(c, self.var_name).items():
                key = (lam, i)
                prev = out.get(key)
                out[key] = a if prev is None else prev + a
        return TensorElement(self.module, self.var_name, out)

    def pi(self, t: TensorElement) -> ModuleElement:
        """Evaluation: ``e_lam X^(i) (x) b -> e_lam * (X^(i) b)``."""
        out = self.module.zero_elem()
        for (lam, i), b in t.terms.items():
            coeff = self.sig.gen_power(self.var_name, i) * b
            out = out + ModuleElement(self.module, {lam: coeff})
        return out

    def diff(self, t: TensorElement) -> TensorElement:
        """``d(n (x) b) = d(n) (x) b + (-1)^{|n|} n (x) d(b)`` on the slots."""
        out = self.zero()
        for (lam, i), b in t.terms.items():
            base = self.module.basis_elem(lam).scale_right(
                self.sig.gen_power(self.var_name, i)
            )
            out = out + self.of_module_elem(self.d.apply(base)).scale_right(b)
            db = diff(b)
            if not db.is_zero():
                n_deg = self.module.degrees[lam] + i * self.var.degree
                if n_deg % 2:
                    db = -db
                out = out + TensorElement(self.module, self.var_name, {(lam, i): db})
        return out


def rho_from_lift(nt: NaiveTensor, lift: LiftResult) -> Callable:
    """The splitting determined by a lift: corrected columns go to
    themselves tensor 1, extended linearly over the algebra."""
    if lift.module != nt.module:
        raise SchemaError("lift belongs to a different module")
    cols = [
        nt.of_module_elem(lift.u.apply(nt.module.basis_elem(lam)))
        for lam in range(nt.module.rank)
    ]

    def rho(x: ModuleElement) -> TensorElement:
        coords = lift.u_inv.apply(x)
        out = nt.zero()
        for lam, c in coords.coeffs.items():
            out = out + cols[lam].scale_right(c)
        return out

    return rho


def verify_splitting(nt: NaiveTensor, lift: LiftResult) -> CheckReport:
    """Check ``pi o rho = id`` and ``rho o d = d o rho`` on every basis column."""
    report = CheckReport(True)
    rho = rho_from_lift(nt, lift)
    for lam in range(nt.module.rank):
        e = nt.module.basis_elem(lam)
        if nt.pi(rho(e)) != e:
            report.note(f"pi(rho({nt.module.names[lam]})) differs")
        if rho(nt.d.apply(e)) != nt.diff(rho(e)):
            report.note(f"rho fails to intertwine d on {nt.module.names[lam]}")
    return report


@dataclass
class OddSequence:
    """The short exact sequence around the evaluation map, odd variable.

    ``kernel_module`` is a finite free module isomorphic to the shift of
    the input by the variable degree; `iota` includes it into the extended
    module and `pi` evaluates.  All arrows are exact-checked by `check`.
    """

    nt: NaiveTensor
    kernel_module: FreeModule
    kernel_diff: Differential

    def iota(self, x: ModuleElement) -> TensorElement:
        nt = self.nt
        out = nt.zero()
        x_elem = nt.sig.gen(nt.var_name)
        for lam, b in x.coeffs.items():
            out = out + nt.slot(lam, 1, b) - nt.slot(lam, 0, x_elem * b)
        return out

    def retract(self, t: TensorElement) -> ModuleElement:
        """Read a kernel element back off its power-1 slots."""
        return ModuleElement(
            self.kernel_module,
            {lam: b for (lam, i), b in t.terms.items() if i == 1},
        )

    def check(self, samples: Optional[list] = None) -> CheckReport:
        report = CheckReport(True)
        nt = self.nt
        names = self.kernel_module.names
        for lam in range(self.kernel_module.rank):
            s = self.kernel_module.basis_elem(lam)
            im = self.iota(s)
            if not nt.pi(im).is_zero():
                report.note(f"pi o iota != 0 on {names[lam]}")
            if nt.diff(im) != self.iota(self.kernel_diff.apply(s)):
                report.note(f"iota fails to intertwine d on {names[lam]}")
        for lam in range(nt.module.rank):
            for i in (0, 1):
                t = nt.slot(lam, i)
                if nt.pi(nt.diff(t)) != nt.d.apply(nt.pi(t)):
                    report.note(f"pi fails to intertwine d on slot ({lam},{i})")
            if nt.pi(nt.slot(lam, 0)) != nt.module.basis_elem(lam):
                report.note(f"pi misses basis element {nt.module.names[lam]}")
        for t in samples or []:
            z = t - self.section_of_pi(nt.pi(t))
            if not nt.pi(z).is_zero():
                report.note("kernel projection failed")
                continue
            if self.iota(self.retract(z)) != z:
                report.note("a kernel element is not in the image of iota")
        return report

    def section_of_pi(self, x: ModuleElement) -> TensorElement:
        """A degreewise linear section of the evaluation (not a chain map)."""
        out = self.nt.zero()
        for lam, c in x.coeffs.items():
            out = out + self.nt.slot(lam, 0, c)
        return out


def odd_ses(module: FreeModule, d: Differential, var_name: str) -> OddSequence:
    """Materialize the kernel and the two arrows for an odd variable."""
    nt = NaiveTensor(module, d, var_name)
    var = nt.var
    if not var.odd:
        raise SchemaError("the finite-rank sequence exists only for an odd variable")
    from .module import fresh_suffix

    sig = module.sig
    suffix = fresh_suffix(module, "_k")
    kernel = FreeModule(
        sig,
        [(n + suffix, deg + var.degree) for n, deg in zip(module.names, module.degrees)],
    )
    x_elem = sig.gen(var_name)
    entries = {}
    for (mu, lam), c in d.matrix.entries.items():
        parts = split_by_powers(c, var_name)
        val = sig.zero()
        a0 = parts.get(0)
        a1 = parts.get(1)
        if a0 is not None:
            val = val + (a0 if a0.degree() % 2 == 0 else -a0)
        if a1 is not None:
            t = a1 * x_elem
            val = val + (-t if a1.degree() % 2 == 0 else t)
        if not val.is_zero():
            entries[(mu, lam)] = val
    kd = Differential(GradedMap(kernel, -1, entries))
    return OddSequence(nt, kernel, kd)
