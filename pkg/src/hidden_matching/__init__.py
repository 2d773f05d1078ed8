"""Hard instances for two-pass streaming matching: RS graphs, encoded products,
augmentation graphs, the Hidden-Matching game, a metered streaming harness,
and a small Fourier / information-theory lab."""

__version__ = "0.1.0"
