"""Dense tensors with tape-based reverse-mode differentiation.

A :class:`Tape` records every differentiable operation executed while it is
active (entered as a context manager).  Recording order is a topological
order, so the backward pass simply walks the node list in reverse.  Gradients
are accumulated (``+=``) into the ``grad`` buffer of every :class:`Parameter`
that contributed to the loss; gradients of other leaves are discarded.
"""

import numpy as np

from ..errors import NonScalarLossError

_TAPES: list["Tape"] = []

_FLOAT_DTYPES = (np.dtype(np.float32), np.dtype(np.float64))


def active_tape():
    """Innermost active tape, or None outside any recording context."""
    return _TAPES[-1] if _TAPES else None


class Tensor:
    """Immutable n-dimensional float array, optionally tracked on a tape."""

    __slots__ = ("data", "grad", "requires_grad", "_tape", "_node")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if arr.dtype not in _FLOAT_DTYPES:
            arr = arr.astype(np.float64)
        self.data = np.ascontiguousarray(arr)
        self.grad = None
        self.requires_grad = requires_grad
        self._tape = None
        self._node = -1

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data.reshape(()))

    def numpy(self) -> np.ndarray:
        return self.data

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype})"

    # arithmetic operators are attached by rangeup.autograd.ops at import time


class Parameter(Tensor):
    """Named trainable leaf; ``grad`` is preallocated and accumulated into."""

    __slots__ = ("name",)

    def __init__(self, name: str, data, dtype=None):
        super().__init__(data, requires_grad=True, dtype=dtype)
        self.name = name
        self.grad = np.zeros_like(self.data)

    def zero_grad(self):
        self.grad[...] = 0.0

    def assign(self, data: np.ndarray):
        """Replace the value in place (optimizer update); shape must match."""
        if data.shape != self.data.shape:
            raise ValueError(f"{self.name}: shape {data.shape} != {self.data.shape}")
        self.data = np.ascontiguousarray(data, dtype=self.data.dtype)

    def __repr__(self):
        return f"Parameter({self.name!r}, shape={self.data.shape})"


class Tape:
    """Append-only record of operations for one forward pass."""

    def __init__(self):
        self._nodes: list[tuple[Tensor, tuple[Tensor, ...], object]] = []

    def __len__(self):
        return len(self._nodes)

    def __enter__(self):
        _TAPES.append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        _TAPES.pop()
        return False

    def record(self, out: Tensor, inputs: tuple, backward) -> None:
        out._tape = self
        out._node = len(self._nodes)
        self._nodes.append((out, inputs, backward))

    def backward(self, loss: Tensor) -> None:
        """Accumulate d(loss)/d(param) into every contributing Parameter.grad.

        May be called repeatedly; each call adds its contribution on top of
        whatever the grad buffers already hold.
        """
        if loss.data.size != 1:
            raise NonScalarLossError(f"loss has shape {loss.data.shape}")
        seed = np.ones_like(loss.data)
        if loss._tape is not self:
            if loss.requires_grad:
                loss.grad += seed
                return
            raise ValueError("loss tensor was not recorded on this tape")

        grads: dict[int, np.ndarray] = {loss._node: seed}
        for node_id in range(len(self._nodes) - 1, -1, -1):
            gout = grads.pop(node_id, None)
            if gout is None:
                continue
            _out, inputs, backward_fn = self._nodes[node_id]
            gins = backward_fn(gout)
            for tensor, gin in zip(inputs, gins):
                if gin is None:
                    continue
                if tensor._tape is self and tensor._node >= 0:
                    acc = grads.get(tensor._node)
                    grads[tensor._node] = gin if acc is None else acc + gin
                elif tensor.requires_grad:
                    if tensor.grad is None:
                        tensor.grad = np.zeros_like(tensor.data)
                    tensor.grad += gin
