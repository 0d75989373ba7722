from .metrics import (
    ConfusionMatrix, Scores, average_scores, confusion, improvement, macro_average, scores,
)
from .overlap import OverlapReport, overlap_analysis
from .published import compare_against_published, load_published
from .scenarios import ScenarioResult, run_mto, run_oto, run_scenario
from .stats import EffectSize, Magnitude, TestResult, cliffs_delta, wilcoxon_signed_rank

__all__ = [
    "ConfusionMatrix", "Scores", "average_scores", "confusion", "improvement",
    "macro_average", "scores", "OverlapReport", "overlap_analysis",
    "compare_against_published", "load_published", "ScenarioResult", "run_mto",
    "run_oto", "run_scenario", "EffectSize", "Magnitude", "TestResult",
    "cliffs_delta", "wilcoxon_signed_rank",
]
