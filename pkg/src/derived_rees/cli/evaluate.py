"""Run a parsed script and collect reports."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .. import __version__
from ..blowup import blowup_charts, chart_consistency, compare_pi0, transition_coherence
from ..cotangent import cotangent_complex, cotangent_homology
from ..dg import koszul
from ..expr import evaluate as eval_expr
from ..homology import is_connective, quasi_iso_in_range
from ..poly import embed, make_ring
from ..rees import (compare_classical, fiber_comparison, generic_fiber, module_complex,
                    rees_ext_koszul, rees_ext_sym, weight_one_generation_check, weight_zero_check)
from .script import BlowupDecl, IdealDecl, ModuleSpec, ReesDecl, Report, RingDecl, Script

OK, ERROR, INCONCLUSIVE = 0, 1, 2


class EvaluationError(Exception):
    def __init__(self, statement, cause):
        super().__init__(f"{statement.text()}: {type(cause).__name__}: {cause}")
        self.statement = statement
        self.cause = cause


@dataclass
class Flags:
    bound: int = 8
    range: tuple = (-3, 3)
    seed: int | None = None


@dataclass
class ReportResult:
    command: str
    verdicts: list
    presentations: dict = field(default_factory=dict)
    timing_ms: float = 0.0

    def to_dict(self, timings=True):
        d = {"command": self.command, "verdicts": self.verdicts}
        if self.presentations:
            d["presentations"] = self.presentations
        if timings:
            d["timing_ms"] = self.timing_ms
        return d


def _verdict(name, status, bounds, witness=None):
    v = {"name": name, "status": status}
    if witness is not None:
        v["witness"] = witness
    v["bounds"] = bounds
    return v


def _qi_status(res):
    return res.status, (None if res.holds is not False else f"degree {res.witness_degree}: {res.failure}")


class Evaluator:
    def __init__(self, flags: Flags | None = None):
        self.flags = flags or Flags()
        self.env: dict = {}

    def run(self, script: Script) -> list[ReportResult]:
        out = []
        for st in script.statements:
            try:
                if isinstance(st, Report):
                    t0 = time.perf_counter()
                    rep = getattr(self, "report_" + st.command)(st, *[self.env[a] for a in st.args])
                    rep.timing_ms = round((time.perf_counter() - t0) * 1000, 3)
                    out.append(rep)
                else:
                    self.env[st.name] = self.bind(st)
            except EvaluationError:
                raise
            except Exception as exc:  # carried to the caller verbatim
                raise EvaluationError(st, exc) from exc
        return out

    # -- bindings --

    def bind(self, st):
        if isinstance(st, RingDecl):
            return make_ring(list(st.variables))
        if isinstance(st, IdealDecl):
            R = self.env[st.ring]
            env = {n: R.var(n) for n in R.names}
            return (st.ring, tuple(embed(eval_expr(g, env, R.const), R) for g in st.gens))
        if isinstance(st, ReesDecl):
            A = self.env[st.ring]
            if st.kind == "rees_ext":
                return rees_ext_koszul(A, self._ideal(st.ideal, st.ring))
            return rees_ext_sym(A, self._module(A, st.module))
        if isinstance(st, BlowupDecl):
            return blowup_charts(self.env[st.ring], self._ideal(st.ideal, st.ring))
        raise TypeError(st)

    def _ideal(self, name, ring):
        owner, gens = self.env[name]
        if owner != ring:
            raise ValueError(f"ideal {name} lives in {owner}, not {ring}")
        return list(gens)

    def _module(self, A, spec: ModuleSpec):
        names = [g[0] for g in spec.gens]
        clash = set(names) & set(A.names)
        if clash:
            raise ValueError(f"module generators clash with ring variables: {sorted(clash)}")
        big = A.extend([(n, 0) for n in names])
        env = {n: big.var(n) for n in big.names}
        idx = [big.index[n] for n in names]
        d = {}
        for src, expr in spec.diffs:
            p = eval_expr(expr, env, big.const)
            row: dict = {}
            for e, c in p.terms.items():
                if sum(e[i] for i in idx) != 1:
                    raise ValueError(f"d({src}) is not linear in the module generators")
                tgt = next(names[k] for k, i in enumerate(idx) if e[i])
                coeff = A.monomial(tuple(e[big.index[n]] for n in A.names), c)
                row[tgt] = row.get(tgt, A.zero()) + coeff
            d[src] = row
        return module_complex(A, list(spec.gens), d)

    # -- reports --

    def _opt(self, st, key, default):
        return dict(st.options).get(key, default)

    def report_connectivity(self, st, R):
        hmin = self._opt(st, "hmin", min(self.flags.range[0], -1))
        bound = self._opt(st, "cutoff", self.flags.bound)
        rep = is_connective(R.presentation, hmin, bound)
        verdicts = []
        for n in range(hmin, 0):
            b = {"degree": n, "bound": bound, "aux_window": rep.bounds["aux_window"]}
            verdicts.append(_verdict(f"H_{n}", rep.verdicts[n], b, rep.witnesses.get(n)))
        return ReportResult(st.text(), verdicts, {"rees": str(R.presentation)})

    def report_fibers(self, st, R):
        a, b = self._opt(st, "range", self.flags.range)
        bound = self._opt(st, "cutoff", self.flags.bound)
        _, _, down, _ = fiber_comparison(R)
        G = generic_fiber(R)
        out = []
        for name, res in (("fiber_at_zero ~ normal_cone", quasi_iso_in_range(down, (a, b), bound)),
                          ("generic_fiber ~ laurent", quasi_iso_in_range(G.inclusion, (a, b), bound,
                                                                         retraction=G.retraction))):
            status, wit = _qi_status(res)
            out.append(_verdict(name, status, {"range": [a, b], "bound": bound}, wit))
        return ReportResult(st.text(), out)

    def report_weights(self, st, R):
        w = self._opt(st, "w", 4)
        bound = self._opt(st, "cutoff", self.flags.bound)
        out = []
        for v in (weight_zero_check(R), weight_one_generation_check(R, w, bound)):
            d = v.to_dict()
            out.append(_verdict(d["name"], d["status"], d.get("bounds", {}), d.get("witness")))
        return ReportResult(st.text(), out)

    def report_classical(self, st, R):
        res = compare_classical(R)
        status = "isomorphic" if res["isomorphic"] else ("surjective" if res["surjective"] else "fail")
        wit = None if res["isomorphic"] else ", ".join(res.get("kernel_generators", [])) or None
        return ReportResult(st.text(), [_verdict("pi0 ~ classical_rees", status, {"exact": True}, wit)])

    def report_charts(self, st, atlas):
        a, b = self._opt(st, "range", (-1, 2))
        bound = self._opt(st, "cutoff", self.flags.bound)
        out = []
        for i in range(atlas.n):
            cmp = compare_pi0(atlas, i)
            status = "isomorphic" if cmp["isomorphic"] else ("surjective" if cmp["surjective"] else "fail")
            wit = None if cmp["isomorphic"] else "kernel " + ", ".join(cmp["kernel_generators"])
            out.append(_verdict(f"chart{i + 1} pi0 ~ classical", status, {"exact": True}, wit))
            res = chart_consistency(atlas.A, list(atlas.centre), i, (a, b), bound)
            s, w = _qi_status(res)
            out.append(_verdict(f"chart{i + 1} consistency", s, {"range": [a, b], "bound": bound}, w))
            for j in range(atlas.n):
                if j != i:
                    v = transition_coherence(atlas, i, j)
                    out.append(_verdict(f"transition {i + 1}->{j + 1}", v.status, {"exact": True}, v.witness))
        pres = {f"chart{i + 1}": str(c) for i, c in enumerate(atlas.charts)}
        return ReportResult(st.text(), out, pres)

    def report_cotangent(self, st, A, ideal):
        n = self._opt(st, "n", 1)
        bound = self._opt(st, "cutoff", self.flags.bound)
        owner, gens = ideal
        if self.env[owner] is not A:
            raise ValueError(f"ideal lives in {owner}, not {st.args[0]}")
        B = koszul(A, list(gens))
        L = cotangent_complex(B, list(A.names))
        H = cotangent_homology(L, n, bound)
        status = "zero" if H.is_zero() else "nonzero"
        wit = None
        if status == "nonzero":
            wit = f"{H.generator_count} generator(s), relations {[[str(p) for p in r] for r in H.relations]}"
        return ReportResult(st.text(), [_verdict(f"H_{n}(L)", status, {"degree": n, "bound": bound}, wit)])


def exit_code(reports) -> int:
    statuses = {v["status"] for r in reports for v in r.verdicts}
    if "fail" in statuses:
        return ERROR
    if "inconclusive" in statuses:
        return INCONCLUSIVE
    return OK


def to_json_dict(script: Script, reports, flags: Flags, timings=True) -> dict:
    d = {"version": __version__,
         "statements": [s.text() for s in script.statements],
         "flags": {"bound": flags.bound, "range": list(flags.range)},
         "reports": [r.to_dict(timings) for r in reports]}
    if flags.seed is not None:
        d["flags"]["seed"] = flags.seed
    return d
