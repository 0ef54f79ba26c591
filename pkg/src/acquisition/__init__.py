from src.acquisition.acquisition_functions import (
    AcquisitionKind, AcquisitionName, AcquisitionValue, acquisition_values, baseline_alpha,
    evaluate_batch, expected_improvement, fitbo_alpha, probability_of_improvement, upper_confidence_bound,
)
