from src.warped_model.warped_gp import WarpedPosterior, predict_f, predict_y, transform_targets
