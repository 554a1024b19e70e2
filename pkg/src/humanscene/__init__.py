"""Annotation, supervision labels, and QA evaluation for human motion in 3D scenes.

The package is organized by pipeline stage:

- :mod:`humanscene.geometry` / :mod:`humanscene.motion` / :mod:`humanscene.scene`:
  primitives, skeleton model, scene data model and loaders.
- :mod:`humanscene.scenegraph` / :mod:`humanscene.annotate`: rule-based scene
  relations and frame-level human-scene annotations.
- :mod:`humanscene.auxlabels` / :mod:`humanscene.kernels`: auxiliary supervision
  targets and the reference numerical kernels with analytic gradients.
- :mod:`humanscene.textgen` / :mod:`humanscene.evaluate`: prompt construction,
  LLM plumbing, and judge-score aggregation.
- :mod:`humanscene.pipeline` / :mod:`humanscene.cli` / :mod:`humanscene.server`:
  the operational shell.
"""

__version__ = "0.1.0"
