"""Least squares, t-distribution tails and factorial analysis reports."""

from augdoe.regstats.analysis import Analysis, GoldenMatch, analyze, compare, match_golden
from augdoe.regstats.ols import ModelFit, ols_fit
from augdoe.regstats.tdist import betainc, t_p_value

__all__ = [
    "Analysis",
    "GoldenMatch",
    "ModelFit",
    "analyze",
    "betainc",
    "compare",
    "match_golden",
    "ols_fit",
    "t_p_value",
]
