from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from src.acquisition import AcquisitionKind
from src.benchmarks import get_benchmark
from src.bo_loop import RANDOM_SEARCH, BOSettings
from src.common.errors import ArgumentError, ConfigError
from src.harness import config

Strategy = Union[AcquisitionKind, str]


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything `cmd_run` needs; `validate` raises ConfigError on the first bad field."""
    benchmark: str
    acquisitions: Tuple[str, ...] = config.DEFAULT_ACQ
    iters: int = config.DEFAULT_ITERS
    reps: int = config.DESK_REPS
    samples: int = config.DEFAULT_SAMPLES
    seed: int = config.DEFAULT_SEED
    acq_budget: int = config.DEFAULT_ACQ_BUDGET
    out: str = config.OUTPUT_DIR
    pin_noise: bool = False
    init_count: Optional[int] = None
    dim: Optional[int] = None
    noise_std: float = config.DEFAULT_NOISE_STD
    workers: int = config.DEFAULT_WORKERS
    burn_in: int = config.DEFAULT_BURN_IN
    thin: int = config.DEFAULT_THIN

    def validate(self) -> 'ExperimentConfig':
        try:
            get_benchmark(self.benchmark, self.dim)
        except ArgumentError as e:
            raise ConfigError(str(e)) from e
        if not self.acquisitions:
            raise ConfigError("At least one acquisition is required")
        self.strategies()
        for name, value in (('iters', self.iters), ('reps', self.reps), ('samples', self.samples),
                            ('acq_budget', self.acq_budget), ('workers', self.workers), ('thin', self.thin)):
            if value < 1:
                raise ConfigError(f"{name} must be >= 1, got {value}")
        if self.burn_in < 0:
            raise ConfigError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.init_count is not None and self.init_count < 1:
            raise ConfigError(f"init_count must be >= 1, got {self.init_count}")
        if not self.noise_std >= 0.0:
            raise ConfigError(f"noise_std must be >= 0, got {self.noise_std}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        return self

    def strategies(self) -> List[Strategy]:
        strategies = []
        for name in self.acquisitions:
            if name == RANDOM_SEARCH:
                strategies.append(RANDOM_SEARCH)
                continue
            try:
                strategies.append(AcquisitionKind.parse(name))
            except ArgumentError as e:
                raise ConfigError(str(e)) from e
        return strategies

    @property
    def initial_points(self) -> int:
        if self.init_count is not None:
            return self.init_count
        return config.DEFAULT_INIT.get(self.benchmark, config.FALLBACK_INIT)

    def bo_settings(self) -> BOSettings:
        return BOSettings(n_samples=self.samples, burn_in=self.burn_in, thin=self.thin,
                          acq_budget=self.acq_budget, recommend_budget=self.acq_budget,
                          pin_noise=self.pin_noise)


def sweep_pairs(m_list, d_list, fixed_m: int = config.RUNTIME_FIXED_M,
                fixed_d: int = config.RUNTIME_FIXED_D) -> Tuple[Tuple[int, int], ...]:
    """M sweep at the fixed d, then d sweep at the fixed M, without duplicates."""
    pairs = [(int(m), fixed_d) for m in m_list] + [(fixed_m, int(d)) for d in d_list]
    return tuple(dict.fromkeys(pairs))


def default_sweeps() -> Tuple[Tuple[int, int], ...]:
    return sweep_pairs(config.RUNTIME_M_LIST, config.RUNTIME_D_LIST)


@dataclass(frozen=True)
class RuntimeConfig:
    """Sweep definition for `cmd_bench_runtime`: every kind at every (M, d) pair."""
    acquisitions: Tuple[str, ...] = config.RUNTIME_ACQ
    sweeps: Tuple[Tuple[int, int], ...] = field(default_factory=default_sweeps)
    reps: int = config.DESK_REPS
    seed: int = config.DEFAULT_SEED
    out: str = config.OUTPUT_DIR
    observations: int = config.RUNTIME_OBSERVATIONS
    test_points: int = config.RUNTIME_TEST_POINTS
    burn_in: int = config.DEFAULT_BURN_IN
    thin: int = config.DEFAULT_THIN

    def validate(self) -> 'RuntimeConfig':
        self.kinds()
        if not self.sweeps:
            raise ConfigError("Runtime sweep is empty")
        for m, d in self.sweeps:
            if m < 1 or d < 1:
                raise ConfigError(f"Sweep entries need M >= 1 and d >= 1, got (M={m}, d={d})")
        for name, value in (('reps', self.reps), ('observations', self.observations),
                            ('test_points', self.test_points), ('thin', self.thin)):
            if value < 1:
                raise ConfigError(f"{name} must be >= 1, got {value}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        return self

    def kinds(self) -> List[AcquisitionKind]:
        if not self.acquisitions:
            raise ConfigError("At least one acquisition is required")
        try:
            return [AcquisitionKind.parse(name) for name in self.acquisitions]
        except ArgumentError as e:
            raise ConfigError(str(e)) from e
