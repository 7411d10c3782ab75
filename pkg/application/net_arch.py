"""
Parameter and multiply-add counting for dense and convolutional networks.

Produces the C (gradient multiply-adds per data point) and W (weights) inputs of
the gradient-descent model. Only matrix multiplications and convolutions are
counted; gradient cost is three passes (forward, error back-propagation, weight
gradient) of the forward cost.
"""
import logging
import sys

from typing import List, Tuple, Union
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from errors import ArchitectureError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("net-arch")

class DenseLayerSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    inputs: int = Field(ge=1, alias="in")
    outputs: int = Field(ge=1, alias="out")
    include_bias: bool = Field(default=False, alias="bias")

class ConvLayerSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    num_maps: int = Field(ge=1, alias="maps")
    kernel_side: int = Field(ge=1, alias="kernel")
    border: int = Field(default=0, ge=0)
    stride: int = Field(default=1, ge=1)
    include_bias: bool = Field(default=False, alias="bias")

class TensorShape(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    side: int = Field(ge=1)
    depth: int = Field(ge=1)

    @property
    def flat_size(self) -> int:
        return self.side * self.side * self.depth

class NetworkCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    total_weights: int = Field(default=0, ge=0)
    forward_madds: int = Field(default=0, ge=0)
    gradient_madds: int = Field(default=0, ge=0)

    def __add__(self, other: "NetworkCounts") -> "NetworkCounts":
        return NetworkCounts(
            total_weights=self.total_weights + other.total_weights,
            forward_madds=self.forward_madds + other.forward_madds,
            gradient_madds=self.gradient_madds + other.gradient_madds,
        )

LayerSpec = Union[DenseLayerSpec, ConvLayerSpec]

def dense_counts(layer: DenseLayerSpec) -> Tuple[int, int]:
    """Returns (weights, forward multiply-adds); bias adds weights but no multiply-adds."""
    weights = layer.inputs * layer.outputs
    if layer.include_bias:
        weights += layer.outputs
    return weights, 2 * layer.inputs * layer.outputs

def conv_output_side(input_side: int, kernel_side: int, border: int, stride: int) -> int:
    """Number of sliding-window positions along one side (integer division)."""
    if input_side < 1 or kernel_side < 1 or stride < 1 or border < 0:
        raise ArchitectureError(
            f"invalid convolution geometry: input={input_side}, kernel={kernel_side}, border={border}, stride={stride}"
        )
    span = input_side - kernel_side + border
    if span < 0:
        raise ArchitectureError(
            f"kernel {kernel_side} is larger than the padded input {input_side + border}"
        )
    return span // stride + 1

def conv_counts(layer: ConvLayerSpec, shape: TensorShape) -> Tuple[int, int, TensorShape]:
    """Returns (weights, forward multiply-adds, output shape)."""
    c = conv_output_side(shape.side, layer.kernel_side, layer.border, layer.stride)
    kernel_weights = layer.kernel_side * layer.kernel_side * shape.depth
    madds = layer.num_maps * kernel_weights * c * c
    weights = layer.num_maps * kernel_weights
    if layer.include_bias:
        weights += layer.num_maps * c * c
    return weights, madds, TensorShape(side=c, depth=layer.num_maps)

def network_totals(layers: List[LayerSpec], shape: TensorShape) -> NetworkCounts:
    """
    Sum weights and multiply-adds over an ordered layer list starting from `shape`.

    A dense layer consumes the flattened previous output (side*side*depth values)
    and produces a 1 x 1 x outputs tensor.
    """
    weights = 0
    forward = 0
    for index, layer in enumerate(layers):
        if isinstance(layer, DenseLayerSpec):
            if layer.inputs != shape.flat_size:
                raise ArchitectureError(
                    f"layer {index}: dense layer expects {layer.inputs} inputs but the previous output has {shape.flat_size}"
                )
            w, f = dense_counts(layer)
            shape = TensorShape(side=1, depth=layer.outputs)
        elif isinstance(layer, ConvLayerSpec):
            try:
                w, f, shape = conv_counts(layer, shape)
            except ArchitectureError as e:
                raise ArchitectureError(f"layer {index}: {e}") from e
        else:
            raise ArchitectureError(f"layer {index}: unsupported layer type {type(layer).__name__}")

        logger.debug(f"layer {index}: weights={w}, forward_madds={f}, out={shape}")
        weights += w
        forward += f

    return NetworkCounts(total_weights=weights, forward_madds=forward, gradient_madds=3 * forward)

MNIST_FC = {
    "layers": [
        {"dense": {"in": 784, "out": 2500}},
        {"dense": {"in": 2500, "out": 2000}},
        {"dense": {"in": 2000, "out": 1500}},
        {"dense": {"in": 1500, "out": 1000}},
        {"dense": {"in": 1000, "out": 500}},
        {"dense": {"in": 500, "out": 10}},
    ]
}

# published totals, not reconstructed layer by layer
INCEPTION_V3 = NetworkCounts(
    total_weights=25_000_000,
    forward_madds=5_000_000_000,
    gradient_madds=15_000_000_000,
)

ARCHITECTURE_PRESETS = {
    "mnist_fc": MNIST_FC,
}

COUNT_PRESETS = {
    "inception_v3": INCEPTION_V3,
}

def parse_layer(document: dict, index: int) -> LayerSpec:
    if not isinstance(document, dict) or len(document) != 1:
        raise ArchitectureError(f"layer {index}: expected one of {{'dense': {{...}}}} or {{'conv': {{...}}}}")

    kind, params = next(iter(document.items()))
    try:
        if kind == "dense":
            return DenseLayerSpec.model_validate(params)
        elif kind == "conv":
            return ConvLayerSpec.model_validate(params)
    except ValidationError as e:
        raise ArchitectureError(f"layer {index} ({kind}): {e.errors()[0]['loc']} {e.errors()[0]['msg']}") from e
    raise ArchitectureError(f"layer {index}: unknown layer type '{kind}'")

def parse_architecture(document: dict) -> Tuple[List[LayerSpec], TensorShape]:
    """
    Parse {"input": {"side", "depth"}, "layers": [...]} into layer specs.

    "input" may be omitted when the first layer is dense; the input is then a
    1 x 1 x inputs tensor.
    """
    if not isinstance(document, dict) or "layers" not in document:
        raise ArchitectureError("architecture must be an object with a 'layers' list")

    layers = [parse_layer(layer, index) for index, layer in enumerate(document["layers"])]

    if "input" in document:
        try:
            shape = TensorShape.model_validate(document["input"])
        except ValidationError as e:
            raise ArchitectureError(f"input: {e.errors()[0]['loc']} {e.errors()[0]['msg']}") from e
    elif layers and isinstance(layers[0], DenseLayerSpec):
        shape = TensorShape(side=1, depth=layers[0].inputs)
    elif not layers:
        shape = TensorShape(side=1, depth=1)
    else:
        raise ArchitectureError("architecture starting with a conv layer needs an 'input' shape")
    return layers, shape

def preset_counts(name: str) -> NetworkCounts:
    if name in COUNT_PRESETS:
        return COUNT_PRESETS[name]
    if name in ARCHITECTURE_PRESETS:
        layers, shape = parse_architecture(ARCHITECTURE_PRESETS[name])
        return network_totals(layers, shape)
    known = sorted(list(COUNT_PRESETS) + list(ARCHITECTURE_PRESETS))
    raise ArchitectureError(f"unknown network preset '{name}' (known: {', '.join(known)})")

def architecture_counts(architecture: Union[str, dict]) -> NetworkCounts:
    """Counts for a preset name or an architecture document."""
    if isinstance(architecture, str):
        return preset_counts(architecture)
    layers, shape = parse_architecture(architecture)
    counts = network_totals(layers, shape)
    logger.info(f"network counts: {counts}")
    return counts
