"""Iterative quantum-inspired heuristics for (weighted) maximum independent set.

Submodules: :mod:`~iqamis.graph`, :mod:`~iqamis.ising`,
:mod:`~iqamis.statevector`, :mod:`~iqamis.qaoa`, :mod:`~iqamis.annealing`,
:mod:`~iqamis.analytic`, :mod:`~iqamis.classical`, :mod:`~iqamis.iqa`,
:mod:`~iqamis.harness` and the ``iqamis`` command line in :mod:`~iqamis.cli`.
"""

__version__ = "0.1.0"
