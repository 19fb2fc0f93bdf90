"""dfsuite: multimodal deepfake-detection toolkit.

Facial-feature extraction from landmark bundles, mel-spectrogram audio
features, from-scratch classifiers, and OR-rule fusion into a four-way
real/deepfake verdict.
"""

__version__ = "0.1.0"
