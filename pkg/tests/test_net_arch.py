import pytest

from errors import ArchitectureError
from net_arch import (
    MNIST_FC,
    ConvLayerSpec,
    DenseLayerSpec,
    NetworkCounts,
    TensorShape,
    architecture_counts,
    conv_counts,
    conv_output_side,
    dense_counts,
    network_totals,
    parse_architecture,
    preset_counts,
)

MNIST_SIZES = [784, 2500, 2000, 1500, 1000, 500, 10]


def mnist_layers(bias=False):
    return [DenseLayerSpec(inputs=a, outputs=b, include_bias=bias) for a, b in zip(MNIST_SIZES, MNIST_SIZES[1:])]


class TestDense:
    def test_counts(self):
        assert dense_counts(DenseLayerSpec(inputs=784, outputs=2500)) == (1_960_000, 3_920_000)
        assert dense_counts(DenseLayerSpec(inputs=1, outputs=1)) == (1, 2)

    def test_bias_adds_weights_only(self):
        assert dense_counts(DenseLayerSpec(inputs=784, outputs=2500, include_bias=True)) == (1_962_500, 3_920_000)

    def test_aliases(self):
        layer = DenseLayerSpec.model_validate({"in": 3, "out": 4, "bias": True})
        assert (layer.inputs, layer.outputs, layer.include_bias) == (3, 4, True)


class TestConv:
    def test_output_side(self):
        assert conv_output_side(28, 5, 0, 1) == 24
        assert conv_output_side(7, 7, 0, 1) == 1
        assert conv_output_side(32, 5, 2, 2) == 15

    def test_kernel_larger_than_input(self):
        with pytest.raises(ArchitectureError):
            conv_output_side(4, 7, 0, 1)
        with pytest.raises(ArchitectureError):
            conv_output_side(4, 6, 1, 3)

    def test_output_side_monotonicity(self):
        for k in range(1, 10):
            assert conv_output_side(28, k + 1, 0, 1) <= conv_output_side(28, k, 0, 1)
        for s in range(1, 10):
            assert conv_output_side(28, 5, 0, s + 1) <= conv_output_side(28, 5, 0, s)
        for b in range(0, 10):
            assert conv_output_side(28, 5, b + 1, 2) >= conv_output_side(28, 5, b, 2)
        for l in range(5, 40):
            assert conv_output_side(l + 1, 5, 0, 2) >= conv_output_side(l, 5, 0, 2)

    def test_counts(self):
        layer = ConvLayerSpec(num_maps=16, kernel_side=5)
        weights, madds, out = conv_counts(layer, TensorShape(side=28, depth=1))
        assert (weights, madds) == (400, 230_400)
        assert out == TensorShape(side=24, depth=16)

    def test_counts_with_bias(self):
        layer = ConvLayerSpec(num_maps=16, kernel_side=5, include_bias=True)
        weights, _, _ = conv_counts(layer, TensorShape(side=28, depth=1))
        assert weights == 9_616

    def test_trivial(self):
        weights, madds, out = conv_counts(ConvLayerSpec(num_maps=1, kernel_side=1), TensorShape(side=1, depth=1))
        assert (weights, madds, out) == (1, 1, TensorShape(side=1, depth=1))


class TestNetworkTotals:
    def test_mnist_dense_stack(self):
        counts = network_totals(mnist_layers(), TensorShape(side=28, depth=1))
        assert counts.total_weights == 11_965_000
        assert counts.forward_madds == 23_930_000
        assert counts.gradient_madds == 71_790_000
        assert abs(counts.total_weights - 12e6) / 12e6 < 0.003
        assert abs(counts.forward_madds - 24e6) / 24e6 < 0.003

    def test_single_layer_and_empty(self):
        assert network_totals([DenseLayerSpec(inputs=1, outputs=1)], TensorShape(side=1, depth=1)) == \
            NetworkCounts(total_weights=1, forward_madds=2, gradient_madds=6)
        assert network_totals([], TensorShape(side=3, depth=3)) == NetworkCounts()

    def test_gradient_is_six_times_weights_without_bias(self):
        counts = network_totals(mnist_layers(), TensorShape(side=28, depth=1))
        assert counts.gradient_madds == 6 * counts.total_weights

    def test_additive_over_concatenation(self):
        shape = TensorShape(side=1, depth=784)
        head, tail = mnist_layers()[:3], mnist_layers()[3:]
        whole = network_totals(head + tail, shape)
        assert whole == network_totals(head, shape) + network_totals(tail, TensorShape(side=1, depth=1500))

    def test_conv_then_dense_consumes_flattened_output(self):
        layers = [
            ConvLayerSpec(num_maps=16, kernel_side=5),
            ConvLayerSpec(num_maps=8, kernel_side=5, stride=2),
            DenseLayerSpec(inputs=10 * 10 * 8, outputs=10),
        ]
        counts = network_totals(layers, TensorShape(side=28, depth=1))
        # second conv sees depth 16: 8 * 25 * 16 weights, 10 x 10 windows
        assert counts.total_weights == 400 + 8 * 25 * 16 + 800 * 10
        assert counts.forward_madds == 230_400 + 8 * 25 * 16 * 100 + 2 * 800 * 10

    def test_shape_mismatch_names_layer(self):
        layers = [DenseLayerSpec(inputs=784, outputs=100), DenseLayerSpec(inputs=99, outputs=10)]
        with pytest.raises(ArchitectureError, match="layer 1"):
            network_totals(layers, TensorShape(side=28, depth=1))


class TestDocuments:
    def test_parse_architecture_without_input(self):
        layers, shape = parse_architecture(MNIST_FC)
        assert shape == TensorShape(side=1, depth=784)
        assert layers == mnist_layers()

    def test_conv_first_needs_input(self):
        with pytest.raises(ArchitectureError):
            parse_architecture({"layers": [{"conv": {"maps": 4, "kernel": 3}}]})

    def test_unknown_layer_type(self):
        with pytest.raises(ArchitectureError, match="pool"):
            parse_architecture({"layers": [{"pool": {"size": 2}}]})

    def test_invalid_layer_fields(self):
        with pytest.raises(ArchitectureError, match="layer 0"):
            parse_architecture({"layers": [{"dense": {"in": 0, "out": 3}}]})

    def test_presets(self):
        assert preset_counts("mnist_fc").total_weights == 11_965_000
        inception = preset_counts("inception_v3")
        assert (inception.total_weights, inception.gradient_madds) == (25_000_000, 15_000_000_000)
        with pytest.raises(ArchitectureError):
            preset_counts("resnet")

    def test_architecture_counts_accepts_documents_and_names(self):
        assert architecture_counts("mnist_fc") == architecture_counts(MNIST_FC)
