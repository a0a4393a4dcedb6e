from . import predictors
from . import traces

from .predictors import DrivingProcess, PredictorSpec
from .traces import TruthTrace

PREDICTORS = {
    "perfect": predictors.PerfectPredictor,
    "constant_rate": predictors.ConstantRatePredictor,
    "linear_extrapolation": predictors.LinearExtrapolationPredictor,
    "noisy_trace": predictors.NoisyTracePredictor,
}
