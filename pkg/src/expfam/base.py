"""Minimal scikit-learn-compatible parameter handling.

Estimators in this package follow the usual conventions: ``__init__``
stores its arguments verbatim, ``fit`` returns ``self``, fitted state is
kept in trailing-underscore attributes, and ``get_params``/``set_params``
expose the constructor arguments.  Duck typing keeps us compatible with
``sklearn.base.clone`` and friends without importing scikit-learn.
"""

import inspect

from .errors import DomainError


class ParamsMixin:
    """get_params/set_params over the ``__init__`` signature."""

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep=True):
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise DomainError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, name, value)
        return self

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def check_is_fitted(estimator, attribute):
    if not hasattr(estimator, attribute):
        raise DomainError(
            f"{type(estimator).__name__} is not fitted; call fit() first"
        )
