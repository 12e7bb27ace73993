"""GRF gait classification, LRP explanations and 1D SPM."""

try:
    from . import _gaitxai as _impl  # installed package layout
except ImportError:  # build-tree layout: extension next to the package
    import _gaitxai as _impl

GaitxaiError = _impl.GaitxaiError
cohens_d = _impl.cohens_d
estimate_fwhm = _impl.estimate_fwhm
explain = _impl.explain
min_max_normalize = _impl.min_max_normalize
permutation_threshold = _impl.permutation_threshold
report = _impl.report
rft_threshold = _impl.rft_threshold
spm = _impl.spm
synth = _impl.synth
t_curve = _impl.t_curve
train = _impl.train
zero_rule = _impl.zero_rule

__all__ = [
    "GaitxaiError",
    "cohens_d",
    "estimate_fwhm",
    "explain",
    "min_max_normalize",
    "permutation_threshold",
    "report",
    "rft_threshold",
    "spm",
    "synth",
    "t_curve",
    "train",
    "zero_rule",
]
