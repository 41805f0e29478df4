"""
Minimal define-by-run reverse-mode automatic differentiation over dense float64 arrays.

A `Tape` records primitive operations while it is active (``with Tape() as tape:``);
`backward` walks the recorded nodes in reverse and returns gradients for every tensor
created with ``requires_grad=True``. Operations called with no active tape simply
compute their result, which is how evaluation-mode forward passes run.
"""
import itertools
import logging
import threading
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    ContractError,
    DimensionError,
    DomainError,
    NumericError,
    ParameterError,
)

logger = logging.getLogger(__name__)

ACTIVATIONS = ("relu", "tanh", "sigmoid", "softmax", "identity")
LOSSES = ("cross_entropy", "mse", "bce")

BCE_CLAMP = 1e-12
BCE_DOMAIN_TOLERANCE = 1e-9

_ids = itertools.count()
_state = threading.local()

ArrayLike = Union[np.ndarray, float, int, Sequence]


class Tensor:
    """
    Immutable n-dimensional float64 array with an optional gradient buffer.

    `values` is read-only once the tensor exists. `grad` is the only mutable slot; it is
    filled by `backward` for leaves that require gradients.
    """

    __slots__ = ("values", "requires_grad", "grad", "tensor_id")

    def __init__(self, values: ArrayLike, requires_grad: bool = False):
        arr = np.array(values, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise NumericError("tensor values must be finite")
        arr.setflags(write=False)
        self.values = arr
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[np.ndarray] = None
        self.tensor_id = next(_ids)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def size(self) -> int:
        return int(self.values.size)

    def numpy(self) -> np.ndarray:
        return self.values

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


@dataclass(frozen=True)
class Node:
    """One recorded primitive: inputs, output and the vector-Jacobian product."""

    op: str
    inputs: Tuple[Tensor, ...]
    output: Tensor
    vjp: Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]


class Tape:
    """Ordered record of primitive operations, rebuilt for every forward pass."""

    def __init__(self):
        self.nodes = []

    def __enter__(self):
        stack = getattr(_state, "stack", None)
        if stack is None:
            stack = _state.stack = []
        stack.append(self)
        return self

    def __exit__(self, exc_type, exc, tb):
        _state.stack.pop()
        return False

    def record(self, op, inputs, output, vjp):
        self.nodes.append(Node(op, tuple(inputs), output, vjp))

    def __len__(self):
        return len(self.nodes)


def active_tape() -> Optional[Tape]:
    stack = getattr(_state, "stack", None)
    return stack[-1] if stack else None


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _emit(op: str, values: np.ndarray, inputs: Sequence[Tensor], vjp) -> Tensor:
    # 輸出張量：任一輸入需要梯度時才記錄節點
    requires_grad = any(t.requires_grad for t in inputs)
    try:
        out = Tensor(values, requires_grad=requires_grad)
    except NumericError as e:
        raise NumericError(f"{op} produced non-finite values") from e
    tape = active_tape()
    if tape is not None and requires_grad:
        tape.record(op, inputs, out, vjp)
    return out


def _unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum out broadcast dimensions so `grad` matches `shape`."""
    if grad.shape == shape:
        return grad
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for dim, size in enumerate(shape):
        if size == 1 and grad.shape[dim] != 1:
            grad = grad.sum(axis=dim, keepdims=True)
    return grad


# --- primitives ---

def matmul(a, b) -> Tensor:
    """Matrix product of an m×k and a k×n tensor."""
    a, b = as_tensor(a), as_tensor(b)
    if a.values.ndim != 2 or b.values.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    av, bv = a.values, b.values

    def vjp(g):
        return g @ bv.T, av.T @ g

    return _emit("matmul", av @ bv, (a, b), vjp)


def add(a, b) -> Tensor:
    """Elementwise sum with numpy broadcasting (bias rows broadcast over a batch)."""
    a, b = as_tensor(a), as_tensor(b)
    try:
        out = a.values + b.values
    except ValueError as e:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}") from e

    def vjp(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return _emit("add", out, (a, b), vjp)


def affine(x, scale: float, shift: float = 0.0) -> Tensor:
    """scale * x + shift with constant scalars."""
    x = as_tensor(x)

    def vjp(g):
        return (g * scale,)

    return _emit("affine", x.values * scale + shift, (x,), vjp)


def tensor_sum(x) -> Tensor:
    """Sum of all elements, as a scalar tensor."""
    x = as_tensor(x)
    shape = x.shape

    def vjp(g):
        return (np.broadcast_to(g, shape).copy(),)

    return _emit("sum", np.array(x.values.sum()), (x,), vjp)


def _sigmoid(v: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    ez = np.exp(v[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softmax(v: np.ndarray) -> np.ndarray:
    shifted = v - v.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def activation(x, kind: str) -> Tensor:
    """Apply relu, tanh, sigmoid, identity elementwise, or softmax along the last axis."""
    x = as_tensor(x)
    v = x.values
    if kind == "relu":
        y = np.maximum(v, 0.0)
        mask = v > 0  # subgradient 0 at the kink

        def vjp(g):
            return (g * mask,)
    elif kind == "tanh":
        y = np.tanh(v)

        def vjp(g):
            return (g * (1.0 - y * y),)
    elif kind == "sigmoid":
        y = _sigmoid(v)

        def vjp(g):
            return (g * y * (1.0 - y),)
    elif kind == "softmax":
        if v.ndim == 0 or v.shape[-1] < 1:
            raise DimensionError("softmax needs a last axis of length >= 1")
        y = _softmax(v)

        def vjp(g):
            return (y * (g - (g * y).sum(axis=-1, keepdims=True)),)
    elif kind == "identity":
        return x
    else:
        raise ParameterError(f"unknown activation {kind!r}; expected one of {ACTIVATIONS}")
    return _emit(kind, y, (x,), vjp)


def _dropout_mask(shape, rate: float, rng_seed) -> np.ndarray:
    if np.ndim(rng_seed) == 0:
        return np.random.default_rng(int(rng_seed)).random(shape) >= rate
    seeds = np.asarray(rng_seed)
    if len(shape) != 2 or seeds.shape[0] != shape[0]:
        raise DimensionError(f"need one dropout seed per row, got {seeds.shape} for {shape}")
    # one generator per row so a sample's mask does not depend on the batch it is in
    return np.stack(
        [np.random.default_rng(np.random.SeedSequence(int(s))).random(shape[1]) >= rate
         for s in seeds]
    )


def dropout(x, rate: float, rng_seed, active: bool) -> Tensor:
    """
    Inverted dropout.

    When active, each element is zeroed with probability `rate` and survivors are scaled
    by 1/(1-rate). `rng_seed` is an int, or a sequence with one seed per row of a 2-D
    input. Inactive dropout returns `x` itself.
    """
    if not 0.0 <= rate < 1.0:
        raise ParameterError(f"dropout rate must lie in [0, 1), got {rate}")
    x = as_tensor(x)
    if not active or rate == 0.0:
        return x
    keep = _dropout_mask(x.shape, rate, rng_seed)
    scale = 1.0 / (1.0 - rate)
    factor = keep * scale

    def vjp(g):
        return (g * factor,)

    return _emit("dropout", x.values * factor, (x,), vjp)


def _class_targets(target: np.ndarray, logits: np.ndarray) -> np.ndarray:
    if target.shape == logits.shape:
        return target.astype(np.float64)
    idx = target.astype(np.int64).reshape(-1)
    batch = logits.shape[0] if logits.ndim == 2 else 1
    if idx.shape[0] != batch:
        raise DimensionError(f"{idx.shape[0]} class targets for a batch of {batch}")
    if np.any(idx < 0) or np.any(idx >= logits.shape[-1]):
        raise DimensionError("class target out of range")
    onehot = np.zeros((batch, logits.shape[-1]))
    onehot[np.arange(batch), idx] = 1.0
    return onehot.reshape(logits.shape)


def loss(output, target, kind: str) -> Tensor:
    """
    Mean-reduced loss as a scalar tensor.

    cross_entropy takes pre-softmax scores and fuses a log-sum-exp softmax with the
    negative log likelihood; its target is a class index per row or a one-hot matrix.
    bce takes probabilities, clamped to [1e-12, 1-1e-12].
    """
    output = as_tensor(output)
    o = output.values
    t = target.values if isinstance(target, Tensor) else np.asarray(target, dtype=np.float64)

    if kind == "mse":
        try:
            diff = o - t
        except ValueError as e:
            raise DimensionError(f"mse of {o.shape} against {t.shape}") from e
        if diff.shape != o.shape:
            raise DimensionError(f"mse target {t.shape} does not fit output {o.shape}")
        n = diff.size

        def vjp(g):
            return (g * 2.0 * diff / n,)

        value = np.mean(diff * diff)
    elif kind == "cross_entropy":
        logits = o if o.ndim == 2 else o.reshape(1, -1)
        onehot = _class_targets(t, o).reshape(logits.shape)
        shifted = logits - logits.max(axis=-1, keepdims=True)
        log_z = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
        log_probs = shifted - log_z
        batch = logits.shape[0]
        value = -np.sum(onehot * log_probs) / batch
        probs = np.exp(log_probs)

        def vjp(g):
            return ((g * (probs - onehot) / batch).reshape(o.shape),)
    elif kind == "bce":
        if np.any(o < -BCE_DOMAIN_TOLERANCE) or np.any(o > 1.0 + BCE_DOMAIN_TOLERANCE):
            raise DomainError("bce expects probabilities in [0, 1]")
        try:
            t = np.broadcast_to(t, o.shape)
        except ValueError as e:
            raise DimensionError(f"bce target {t.shape} does not fit output {o.shape}") from e
        p = np.clip(o, BCE_CLAMP, 1.0 - BCE_CLAMP)
        n = p.size
        value = -np.mean(t * np.log(p) + (1.0 - t) * np.log(1.0 - p))

        # gradient evaluated at the clamped probability, passed straight through
        def vjp(g):
            return (g * (p - t) / (p * (1.0 - p)) / n,)
    else:
        raise ParameterError(f"unknown loss {kind!r}; expected one of {LOSSES}")

    return _emit(kind, np.array(value), (output,), vjp)


# --- reverse pass ---

class Gradients:
    """Gradient lookup by tensor; tensors the loss does not reach get zeros."""

    def __init__(self, grads: Dict[int, np.ndarray]):
        self._grads = grads

    def __getitem__(self, tensor: Tensor) -> np.ndarray:
        g = self._grads.get(tensor.tensor_id)
        if g is None:
            return np.zeros(tensor.shape)
        return g

    def __contains__(self, tensor: Tensor) -> bool:
        return tensor.tensor_id in self._grads


def backward(tape: Tape, loss_node: Tensor) -> Gradients:
    """
    Propagate d(loss)/d(node) through `tape` in reverse recording order.

    Every node is visited once. Leaves that require gradients get their `grad` filled.
    """
    if loss_node.size != 1 or loss_node.values.ndim > 1:
        raise ContractError(f"backward needs a scalar loss, got shape {loss_node.shape}")
    grads: Dict[int, np.ndarray] = {loss_node.tensor_id: np.ones(loss_node.shape)}
    produced = set()
    leaves = {}
    for node in reversed(tape.nodes):
        produced.add(node.output.tensor_id)
        g_out = grads.get(node.output.tensor_id)
        if g_out is None:
            continue
        for inp, g_in in zip(node.inputs, node.vjp(g_out)):
            if g_in is None or not inp.requires_grad:
                continue
            prev = grads.get(inp.tensor_id)
            grads[inp.tensor_id] = g_in if prev is None else prev + g_in
            leaves[inp.tensor_id] = inp
    for tid, tensor in leaves.items():
        if tid not in produced:
            tensor.grad = grads[tid]
    return Gradients(grads)


def input_gradient(model, x, target, loss_kind: str, **forward_kwargs) -> np.ndarray:
    """
    Gradient of the scalar loss with respect to the model input; parameters untouched.

    `x` is one input vector or a batch of rows. For cross_entropy the loss is taken on
    the model's pre-softmax scores.
    """
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    batch = arr.reshape(1, -1) if single else arr
    if batch.ndim != 2 or batch.shape[1] != model.input_dim:
        raise DimensionError(f"input of shape {arr.shape} for model input width {model.input_dim}")
    tgt = np.asarray(target)
    if single and loss_kind != "cross_entropy":
        tgt = tgt.reshape(1, -1)
    with Tape() as tape:
        xt = Tensor(batch, requires_grad=True)
        out = model.forward(
            xt, apply_output_activation=(loss_kind != "cross_entropy"), **forward_kwargs
        )
        value = loss(out, tgt, loss_kind)
    grad = backward(tape, value)[xt]
    return grad.reshape(arr.shape)
