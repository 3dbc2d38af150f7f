"""Factorial-analysis reports and comparison against published coefficient tables."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from augdoe.doe import CODINGS, ResultsTable, encode_design_matrix
from augdoe.errors import InvalidInputError
from augdoe.regstats.ols import ModelFit, ols_fit

ALPHA = 0.05

# maximum |published - fitted| per column for a table to count as reproduced
TOLERANCES = {"estimate": 0.01, "std_error": 0.01, "t": 0.02, "p": 0.002}

# responses whose name is ambiguous in the published tables
RESPONSE_ALIASES = {"cityscapes": ("cs_i", "cs_ii"), "synthia": ("synthia_ii",)}


@dataclass(frozen=True)
class Analysis:
    response: str
    model: str
    coding: str
    fit: ModelFit
    n: int
    alpha: float = ALPHA

    def terms(self, rounded: bool = True) -> list[dict]:
        rows = []
        for name, est, se, t, p in zip(
            self.fit.terms, self.fit.estimates, self.fit.std_errors, self.fit.t_values, self.fit.p_values
        ):
            row = {"name": name, "estimate": float(est), "std_error": float(se), "t": float(t), "p": float(p)}
            if rounded:
                row = {
                    "name": name,
                    "estimate": round(row["estimate"], 4),
                    "std_error": round(row["std_error"], 4),
                    "t": round(row["t"], 2),
                    "p": round(row["p"], 4),
                }
            row["significant"] = bool(p < self.alpha)
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {
            "response": self.response,
            "model": self.model,
            "coding": self.coding,
            "n": self.n,
            "residual_df": self.fit.residual_df,
            "sigma2": self.fit.sigma2,
            "r2": self.fit.r2,
            "alpha": self.alpha,
            "terms": self.terms(rounded=True),
            "unrounded": self.terms(rounded=False),
        }

    def to_text(self) -> str:
        rows = self.terms(rounded=True)
        width = max(len("term"), *(len(r["name"]) for r in rows))
        head = f"{'term':<{width}}  {'Estimate':>10}  {'Std. Error':>10}  {'t value':>8}  {'Pr(>|t|)':>8}"
        lines = [
            f"response={self.response} model={self.model} coding={self.coding} n={self.n} "
            f"residual_df={self.fit.residual_df} r2={self.fit.r2:.4f}",
            head,
            "-" * len(head),
        ]
        for r in rows:
            flag = " *" if r["significant"] else ""
            lines.append(
                f"{r['name']:<{width}}  {r['estimate']:>10.4f}  {r['std_error']:>10.4f}  {r['t']:>8.2f}  "
                f"{r['p']:>8.4f}{flag}"
            )
        lines.append(f"* significant at alpha = {self.alpha:g}")
        return "\n".join(lines) + "\n"


def analyze(table: ResultsTable, response: str, model: str = "quadratic", coding: str = "zero_one",
            alpha: float = ALPHA) -> Analysis:
    X, names = encode_design_matrix(table, coding, model)
    fit = ols_fit(X, table.response(response), names)
    return Analysis(response, model, coding, fit, len(X), alpha)


def load_goldens() -> dict:
    return json.loads(resources.files("augdoe").joinpath("data/goldens.json").read_text())


def compare(analysis: Analysis, golden: dict) -> dict:
    """Per-term and worst-case differences between a fit and a published table."""
    fitted = {r["name"]: r for r in analysis.terms(rounded=False)}
    missing = [g["name"] for g in golden["terms"] if g["name"] not in fitted]
    if missing:
        raise InvalidInputError(f"fit lacks published terms {missing}")
    per_term = []
    worst = dict.fromkeys(TOLERANCES, 0.0)
    for g in golden["terms"]:
        f = fitted[g["name"]]
        deltas = {q: f[q] - g[q] for q in TOLERANCES}
        for q, d in deltas.items():
            worst[q] = max(worst[q], abs(d))
        per_term.append({"name": g["name"], "published": {q: g[q] for q in TOLERANCES},
                         "fitted": {q: f[q] for q in TOLERANCES}, "delta": deltas})
    score = max(worst[q] / TOLERANCES[q] for q in TOLERANCES)
    return {
        "response": analysis.response,
        "coding": analysis.coding,
        "max_abs_delta": worst,
        "worst_ratio_to_tolerance": score,
        "within_tolerance": score <= 1.0,
        "terms": per_term,
    }


@dataclass(frozen=True)
class GoldenMatch:
    golden: str
    best: Analysis
    best_comparison: dict
    candidates: list

    @property
    def within_tolerance(self) -> bool:
        return self.best_comparison["within_tolerance"]

    def to_dict(self) -> dict:
        return {
            "golden": self.golden,
            "tolerances": TOLERANCES,
            "chosen": {"response": self.best.response, "coding": self.best.coding},
            "within_tolerance": self.within_tolerance,
            "candidates": [
                {k: c[k] for k in ("response", "coding", "max_abs_delta", "worst_ratio_to_tolerance",
                                   "within_tolerance")}
                for c in self.candidates
            ],
            "discrepancy": self.best_comparison,
        }

    def to_text(self) -> str:
        lines = [f"comparison against {self.golden} (tolerances: "
                 + ", ".join(f"{k} {v:g}" for k, v in TOLERANCES.items()) + ")"]
        for c in self.candidates:
            d = c["max_abs_delta"]
            lines.append(
                f"  response={c['response']:<10} coding={c['coding']:<10} max|d| est={d['estimate']:.4f} "
                f"se={d['std_error']:.4f} t={d['t']:.3f} p={d['p']:.4f} "
                f"{'WITHIN' if c['within_tolerance'] else 'OUTSIDE'} tolerance"
            )
        lines.append(f"  best match: response={self.best.response} coding={self.best.coding}")
        if not self.within_tolerance:
            lines.append("  discrepancy per term (fitted - published):")
            for t in self.best_comparison["terms"]:
                d = t["delta"]
                lines.append(f"    {t['name']:<12} est {d['estimate']:+.4f}  se {d['std_error']:+.4f}  "
                             f"t {d['t']:+.3f}  p {d['p']:+.4f}")
        return "\n".join(lines) + "\n"


def match_golden(table: ResultsTable, golden_name: str, responses=None, codings=CODINGS) -> GoldenMatch:
    """Fit every (response, coding) candidate and pick the one closest to a published table."""
    goldens = load_goldens()
    if golden_name not in goldens:
        raise InvalidInputError(f"unknown golden table {golden_name!r}; have {sorted(goldens)}")
    golden = goldens[golden_name]
    responses = list(responses or golden["responses"])
    scored = []
    for resp in responses:
        for coding in codings:
            a = analyze(table, resp, golden["model"], coding)
            scored.append((compare(a, golden), a))
    scored.sort(key=lambda ca: ca[0]["worst_ratio_to_tolerance"])
    best_cmp, best = scored[0]
    return GoldenMatch(golden_name, best, best_cmp, [c for c, _ in scored])


def golden_for(response: str) -> str | None:
    for name, g in load_goldens().items():
        if response in g["responses"] or RESPONSE_ALIASES.get(response, ()) == tuple(g["responses"]):
            return name
    return None
