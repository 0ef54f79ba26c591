from src.hyper_posterior.priors import PriorSpec, WhitenedParams
from src.hyper_posterior.likelihood import log_likelihood
from src.hyper_posterior.ess import ess_step
from src.hyper_posterior.sampler import HyperSample, HyperSampleSet, build_sample_set, sample_posterior
