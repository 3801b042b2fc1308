"""Speech gesture toolkit.

Generates upper-body gesture motion from speech, conditioned on fine-level
pose controls and coarse-level style controls; evaluates outputs with FGD,
PCS, and SCS; and exposes the pipeline through a REST service for
interactive authoring.
"""

__version__ = "0.1.0"
