from src.gp_core.kernels import KernelHypers, kernel_se, kernel_matrix
from src.gp_core.gaussian_process import Dataset, CholFactor, GPosterior, cholesky_jitter, posterior_g
