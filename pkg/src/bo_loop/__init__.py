from src.bo_loop.problem import Problem, Truth
from src.bo_loop.metrics import immediate_regret, l2_distance
from src.bo_loop.trace import BOTrace, IterationRecord, TIMING_FIELDS
from src.bo_loop.acq_optimizer import AcquisitionOptimizer, SearchResult, maximize_acquisition, recommend
from src.bo_loop.optimizer import RANDOM_SEARCH, BayesianOptimizer, BOSettings, run_bo, run_random_search
