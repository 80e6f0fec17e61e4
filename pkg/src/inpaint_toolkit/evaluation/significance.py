import logging
from collections.abc import Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict
from statsmodels.stats.proportion import proportions_ztest

from ..core.models import RubricKind
from ..exceptions import DegenerateTest, ValidationError
from .judgments import JudgmentKey
from .rubrics import RUBRICS

logger = logging.getLogger(__name__)


class ZTestResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    z: float
    p_value: float


class SystemComparison(BaseModel):
    model_config = ConfigDict(frozen=True)

    rubric: RubricKind
    acceptable: str
    x1: int
    n1: int
    x2: int
    n2: int
    z: float
    p_value: float

    @property
    def proportion1(self) -> float:
        return self.x1 / self.n1

    @property
    def proportion2(self) -> float:
        return self.x2 / self.n2


def two_proportion_z_test(x1: int, n1: int, x2: int, n2: int) -> ZTestResult:
    """Pooled two-proportion z-test with a two-sided p-value, computed by statsmodels.

    Raises:
        ValidationError: If counts are out of range
        DegenerateTest: If the pooled proportion is 0 or 1
    """
    for x, n in ((x1, n1), (x2, n2)):
        if n < 1 or not 0 <= x <= n:
            raise ValidationError(f"Need 0 <= successes <= trials and trials >= 1, got {x}/{n}")
    pooled = (x1 + x2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise DegenerateTest(f"Pooled proportion is {pooled}; the test has zero variance")
    z, p_value = proportions_ztest(np.array([x1, x2]), np.array([n1, n2]), alternative="two-sided")
    return ZTestResult(z=float(z), p_value=min(float(p_value), 1.0))


def _successes(consensus: Mapping[JudgmentKey, str | None], rubric: RubricKind, acceptable: str) -> tuple[int, int]:
    labels = [label for key, label in consensus.items() if key.rubric is rubric and label is not None]
    return sum(1 for label in labels if label == acceptable), len(labels)


def compare_systems(
    consensus_a: Mapping[JudgmentKey, str | None],
    consensus_b: Mapping[JudgmentKey, str | None],
    rubric: RubricKind | str,
    acceptable: str,
) -> SystemComparison:
    """Test whether two systems differ in their share of acceptable labels for one rubric.

    Turns without consensus are left out of both counts.
    """
    kind = RubricKind(rubric)
    if acceptable not in RUBRICS[kind].options:
        raise ValidationError(f"'{acceptable}' is not a {kind} option")
    x1, n1 = _successes(consensus_a, kind, acceptable)
    x2, n2 = _successes(consensus_b, kind, acceptable)
    result = two_proportion_z_test(x1, n1, x2, n2)
    logger.info(f"{kind} '{acceptable}': {x1}/{n1} vs {x2}/{n2}, z={result.z:.4f}, p={result.p_value:.4g}")
    return SystemComparison(
        rubric=kind, acceptable=acceptable, x1=x1, n1=n1, x2=x2, n2=n2, z=result.z, p_value=result.p_value
    )
