"""First-order optimizers over flat parameter vectors."""

from __future__ import annotations

import numpy as np


class GradientDescent:
    def __init__(self, lr: float = 0.1):
        if lr <= 0:
            raise ValueError("learning rate must be positive")
        self.lr = lr
        self.steps = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        self.steps += 1
        return params - self.lr * grad


class Adam:
    def __init__(self, lr: float = 0.1, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        if lr <= 0:
            raise ValueError("learning rate must be positive")
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.steps = 0
        self._m: np.ndarray | None = None
        self._v: np.ndarray | None = None

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self._m is None:
            self._m = np.zeros_like(params)
            self._v = np.zeros_like(params)
        self.steps += 1
        t = self.steps
        self._m = self.beta1 * self._m + (1 - self.beta1) * grad
        self._v = self.beta2 * self._v + (1 - self.beta2) * grad * grad
        m_hat = self._m / (1 - self.beta1 ** t)
        v_hat = self._v / (1 - self.beta2 ** t)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
