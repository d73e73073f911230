"""Hierarchical community detection by recursive spectral bi-partitioning.

Thin wrapper over the compiled core: sample binary-tree block models, detect
community hierarchies, and score them against ground truth.
"""

import json as _json

from . import _core

__all__ = [
    "derive_params",
    "sample",
    "truth_labels",
    "analytic_spectrum",
    "detect",
    "kway",
    "nmi",
    "similarity_error",
    "level_accuracy",
    "run_experiment",
]

derive_params = _core.derive_params
sample = _core.sample
truth_labels = _core.truth_labels
analytic_spectrum = _core.analytic_spectrum
kway = _core.kway
nmi = _core.nmi


def detect(n, edges, method="spec", stopper="nb", tau=0.1, tol=1e-8, seed=12345,
           min_size=4, max_depth=30):
    """Detect a community hierarchy; returns the result as a dict.

    Keys: ``k_hat``, ``labels`` (node id -> community label), ``tree``
    (nested ``label``/``children``/``members``), ``diagnostics``,
    ``level_nnz``, ``splitter``, ``stopper``.
    """
    text = _core.detect_json(n, edges, method, stopper, tau, tol, seed, min_size, max_depth)
    return _json.loads(text)


def similarity_error(est_tree, truth_tree):
    """Normalized squared error between two hierarchies' similarity profiles.

    Trees are nested dicts as returned by :func:`detect` under ``"tree"``.
    """
    return _core.similarity_error(_json.dumps(est_tree), _json.dumps(truth_tree))


def level_accuracy(est_tree, truth_tree, q):
    """Best-matching accuracy of the estimated hierarchy truncated at level ``q``."""
    return _core.level_accuracy(_json.dumps(est_tree), _json.dumps(truth_tree), q)


def run_experiment(config_text):
    """Run a config-driven experiment; returns ``(csv_text, summary_dict)``."""
    csv_text, summary_json = _core.run_experiment_config(config_text)
    return csv_text, _json.loads(summary_json)
