from src.benchmarks.functions import BENCHMARKS, BenchmarkSpec, ackley, evaluate, evaluate_batch, get_benchmark
from src.benchmarks.oracle import OracleResult, truth_oracle
from src.benchmarks.problems import DEFAULT_NOISE_STD, make_problem
