"""scikit-learn style wrappers around the cohomology and classification code.

``EquivariantCohomology`` is fitted on an equivariant module and maps 3-cochains
to H^3 class coordinates; ``FactorSetClassifier`` is fitted on a base
Gr-category plus module and assigns factor sets to cohomology classes.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from gammacat.classify import verify_omega
from gammacat.cochain import Cochain3, combine
from gammacat.errors import NotACocycle
from gammacat.factorset import induce_cocycle, strictify
from gammacat.homology import DEFAULT_CAP, class_coordinates, compute_h3, solve_coboundary

__all__ = ["EquivariantCohomology", "FactorSetClassifier"]


class EquivariantCohomology(TransformerMixin, BaseEstimator):
    """H^3 of an equivariant module as a fitted transformer.

    fit(em) computes the group; transform(cochains) returns an integer array
    of class coordinates (one row per cochain, one column per invariant
    factor); predict(cochains) returns the index of the class among
    ``representatives_``.
    """

    def __init__(self, method="snf", cap=DEFAULT_CAP, representative_cap=4096):
        self.method = method
        self.cap = cap
        self.representative_cap = representative_cap

    def fit(self, em, y=None):
        res = compute_h3(em, method=self.method, cap=self.cap, representative_cap=self.representative_cap)
        self.em_ = em
        self.order_ = res.order
        self.invariant_factors_ = list(res.invariant_factors)
        self.representatives_ = res.representatives
        if res.representatives is not None:
            # representative order differs between methods; index by class coordinates
            self._rep_index = {class_coordinates(h): i for i, h in enumerate(res.representatives)}
        else:
            self._rep_index = None
        return self

    def transform(self, cochains):
        check_is_fitted(self, "order_")
        rows = []
        for h in cochains:
            c = class_coordinates(h)
            if c is None:
                raise NotACocycle("input cochain is not a cocycle", witness=None)
            rows.append(c)
        return np.array(rows, dtype=np.int64).reshape(len(rows), len(self.invariant_factors_))

    def predict(self, cochains):
        check_is_fitted(self, "order_")
        if self._rep_index is None:
            raise ValueError("representatives were not computed; raise representative_cap")
        return np.array([self._rep_index[tuple(r)] for r in self.transform(cochains)], dtype=np.int64)


class FactorSetClassifier(BaseEstimator):
    """Classifies factor sets over a fixed base by the cohomology class they induce.

    fit((em, base)) runs the full classification check and stores the
    report in ``report_`` and the class representatives in ``classes_``.
    predict(factor_sets) returns class indices.
    """

    def __init__(self, cap=DEFAULT_CAP):
        self.cap = cap

    def fit(self, X, y=None):
        em, base = X
        self.em_ = em
        self.report_ = verify_omega(em, base, cap=self.cap)
        self.classes_ = [p["cocycle"] for p in sorted(self.report_.pairing, key=lambda p: p["cohomology_class"])]
        return self

    def predict(self, factor_sets):
        check_is_fitted(self, "report_")
        out = []
        for fs in factor_sets:
            h = induce_cocycle(strictify(fs)[0])
            for i, rep in enumerate(self.classes_):
                if solve_coboundary(h.em, combine(h, -1, rep), cap=self.cap) is not None:
                    out.append(i)
                    break
            else:
                out.append(-1)
        return np.array(out, dtype=np.int64)
