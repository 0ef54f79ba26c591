from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

import numpy as np

# fields that depend on wall-clock time and are kept out of reproducible files
TIMING_FIELDS = ('sampling_seconds', 'acquisition_seconds', 'recommendation_seconds')


@dataclass
class IterationRecord:
    iteration: int
    x: List[float]
    y: float
    recommendation: List[float]
    ir: Optional[float]
    l2: Optional[float]
    acquisition_value: Optional[float] = None
    acquisition_evaluations: int = 0
    sampling_seconds: float = 0.0
    acquisition_seconds: float = 0.0
    recommendation_seconds: float = 0.0

    def deterministic(self) -> Dict:
        return {k: v for k, v in asdict(self).items() if k not in TIMING_FIELDS}

    def timings(self) -> Dict:
        return {'iteration': self.iteration, **{k: getattr(self, k) for k in TIMING_FIELDS}}


@dataclass
class BOTrace:
    problem: str
    strategy: str
    seed: int
    initial_X: List[List[float]] = field(default_factory=list)
    initial_y: List[float] = field(default_factory=list)
    records: List[IterationRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def header(self) -> Dict:
        return {'problem': self.problem, 'strategy': self.strategy, 'seed': self.seed,
                'initial_X': self.initial_X, 'initial_y': self.initial_y}

    @property
    def immediate_regrets(self) -> np.ndarray:
        return np.array([np.nan if r.ir is None else r.ir for r in self.records])

    @property
    def l2_distances(self) -> np.ndarray:
        return np.array([np.nan if r.l2 is None else r.l2 for r in self.records])

    @property
    def recommendations(self) -> np.ndarray:
        return np.array([r.recommendation for r in self.records])

    @property
    def queries(self) -> np.ndarray:
        return np.array([r.x for r in self.records])
