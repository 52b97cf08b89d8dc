import numpy as np
import pytest

import mypythontools

mypythontools.paths.PROJECT_PATHS.add_ROOT_PATH_to_sys_path()

from dirsimplicial import datagen, dswl
from dirsimplicial._errors import NonFiniteLoss, ShapeMismatch
from dirsimplicial.adjacency import AdjacencySpec, lower_adjacency
from dirsimplicial.complex_core import permute_vertices
from dirsimplicial.flag_lift import Digraph, lift_directed_flag, symmetrize
from dirsimplicial.models import baselines, dirsnn, models_assignment, network, training

four_node = lift_directed_flag(Digraph(4, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 0)]))
circulant_pair = [dswl.circulant_digraph(6, (1, 2)), dswl.circulant_digraph(6, (1, 3))]


def _samples(K, model, count=6, seed=0):
    rng = np.random.default_rng(seed)
    inputs = {dim: rng.normal(size=(count, K.count(dim), 1)) for dim in model.dims}
    labels = rng.integers(model.classes, size=count)
    return training.GraphSamples.from_complex(K, model, inputs, labels)


def test_linear_layer_reproduces_diffusion():
    spec = datagen.SbmSpec(n=12, communities=3, p_in=0.9, p_out=0.1, seed=4)
    K = lift_directed_flag(datagen.gen_sbm(spec))
    x = np.random.default_rng(1).normal(size=(K.count(1), 1))
    layer = dirsnn.LayerSpec(
        relations=(AdjacencySpec("down", 1, 0, 1),), out_features=1, nonlinearity="identity", use_self=False
    )
    params = {"down_1_0_1": np.ones((1, 1)), "bias": np.zeros(1)}

    result = dirsnn.layer_forward(K, layer, params, dirsnn.SignalTensor(1, x))
    expected = datagen.diffusion_operator(K, directed=True).astype(float) @ x

    assert result.dim == 1
    assert np.max(np.abs(result.values - expected)) < 1e-12


def test_layer_shape_mismatch():
    layer = dirsnn.LayerSpec(relations=(AdjacencySpec("down", 1, 0, 1),), in_features=2, out_features=3)
    params = dirsnn.init_model_parameters(dirsnn.ModelSpec((layer,), classes=2))
    local = {name.split("/", 2)[2]: value for name, value in params.items() if name.startswith("layer0/")}

    with pytest.raises(ShapeMismatch):
        dirsnn.layer_forward(four_node, layer, local, dirsnn.SignalTensor(1, np.ones((5, 1))))

    with pytest.raises(ShapeMismatch):
        dirsnn.layer_forward(four_node, layer, local, dirsnn.SignalTensor(1, np.ones((4, 2))))


def test_parameter_names():
    model = dirsnn.expressivity_model(n_layers=1, width=4, use_kappa=True, per_face_boundary=True)
    names = set(dirsnn.parameter_shapes(model))

    assert "layer0/d1/down_1_0_1" in names
    assert "layer0/d1/down_1_0_1/kappa" in names
    assert "layer0/d1/up_1_2_0" in names
    assert "layer0/d0/up_1_2_0" not in names
    assert {"layer0/d2/boundary_0", "layer0/d2/boundary_2", "layer0/d1/coboundary_2"} <= names
    assert "layer0/d0/down_1_0_1" not in names
    assert "head0/weight" in names


def test_model_validation():
    with pytest.raises(ValueError):
        dirsnn.validate_model(dirsnn.source_localization_model(n_layers=1, width=4, classes=1))

    with pytest.raises(ValueError):
        dirsnn.validate_model(dirsnn.dirsnn_model(n_layers=1, width=4, classes=2, relations=()))


def test_models_assignment_builds_all_models():
    K = four_node
    for name, builder in models_assignment.items():
        model = builder(n_layers=2, width=4, classes=3, head_widths=(5,))
        params = dirsnn.init_model_parameters(model)
        logits = dirsnn.model_forward(K, model, params, np.ones((2, K.count(1), 1)))

        assert logits.shape == (2, 3), name
        assert np.isfinite(logits).all(), name


def test_gradients_of_three_layer_model():
    model = dirsnn.expressivity_model(n_layers=3, width=5, classes=3, use_kappa=True, head_widths=(4,))
    data = _samples(four_node, model)
    params = dirsnn.init_model_parameters(model, seed=3)

    assert training.grad_check(data.plan, params, data.inputs, data.labels, fraction=0.3) < 1e-4


def test_gradients_of_linear_model():
    model = dirsnn.source_localization_model(n_layers=1, width=3, classes=2, nonlinearity="identity")
    data = _samples(four_node, model, seed=1)
    params = dirsnn.init_model_parameters(model, seed=5)

    assert training.grad_check(data.plan, params, data.inputs, data.labels, fraction=1.0) < 1e-7


def test_grad_check_reports_relative_error(monkeypatch):
    model = dirsnn.source_localization_model(n_layers=1, width=3, classes=2, nonlinearity="identity")
    data = _samples(four_node, model, seed=1)
    params = dirsnn.init_model_parameters(model, seed=5)

    def scaled_loss_and_gradients(*args):
        loss, grads, logits = network.loss_and_gradients(*args)
        return loss, network.Parameters({name: grad * 1.01 for name, grad in grads.items()}), logits

    monkeypatch.setattr(training, "loss_and_gradients", scaled_loss_and_gradients)
    error = training.grad_check(data.plan, params, data.inputs, data.labels, fraction=1.0)

    # 1 % too large gradient is 0.01 / 1.01 off whatever the gradient magnitude
    assert 0.009 < error < 0.011

def test_grad_check_epsilon_range():
    model = dirsnn.source_localization_model(n_layers=1, width=3, classes=2)
    data = _samples(four_node, model)

    with pytest.raises(ValueError):
        training.grad_check(data.plan, dirsnn.init_model_parameters(model), data.inputs, data.labels, 1e-2)


def test_training_is_deterministic():
    model = models_assignment["Dir-SNN"](n_layers=2, width=4, classes=2)
    data = [_samples(four_node, model, count=10)]

    first_params, first_trace = training.train(model, data, data, epochs=4, batch=3, seed=7)
    second_params, second_trace = training.train(model, data, data, epochs=4, batch=3, seed=7)

    assert first_trace == second_trace
    assert all(np.array_equal(first_params[name], second_params[name]) for name in first_params)
    assert len(first_trace) == 8
    assert list(first_trace.to_df()["split"][:2]) == ["train", "val"]


def test_training_reduces_loss():
    model = models_assignment["Dir-SNN"](n_layers=1, width=8, classes=2)
    data = [_samples(four_node, model, count=8, seed=2)]

    _, trace = training.train(model, data, epochs=60, batch=8, learning_rate=0.05)
    losses = trace.to_df()["loss"]

    assert losses.iloc[-1] < losses.iloc[0]


def test_logits_do_not_depend_on_vertex_numbering():
    model = dirsnn.expressivity_model(n_layers=2, width=5, classes=3, in_features=2, use_kappa=True)
    params = dirsnn.init_model_parameters(model, seed=4)
    K = lift_directed_flag(circulant_pair[0])
    permutation = [3, 5, 0, 4, 1, 2]
    permuted = permute_vertices(K, permutation)

    rng = np.random.default_rng(0)
    inputs = {dim: rng.normal(size=(K.count(dim), 2)) for dim in model.dims}
    permuted_inputs = {dim: np.zeros_like(values) for dim, values in inputs.items()}
    for simplex_id, simplex in zip(K.ids(), K):
        moved = permuted.index([permutation[v] for v in simplex])
        permuted_inputs[moved.dim][moved.index] = inputs[simplex_id.dim][simplex_id.index]

    assert np.allclose(
        dirsnn.model_forward(K, model, params, inputs),
        dirsnn.model_forward(permuted, model, params, permuted_inputs),
    )


def test_tied_dirsnn_is_snn_on_symmetrized_complex():
    K = symmetrize(four_node)
    snn = baselines.snn_model(n_layers=2, width=4, classes=3)
    tied = dirsnn.source_localization_model(n_layers=2, width=4, classes=3)
    snn_params = dirsnn.init_model_parameters(snn, seed=6)

    tied_params = {}
    for name in dirsnn.parameter_shapes(tied):
        prefix, _, last = name.rpartition("/")
        tied_params[name] = snn_params[f"{prefix}/undirected_lower" if last.startswith("down_") else name]

    x = np.random.default_rng(1).normal(size=(5, K.count(1), 1))

    assert np.allclose(
        dirsnn.model_forward(K, tied, tied_params, x), dirsnn.model_forward(K, snn, snn_params, x)
    )


@pytest.mark.parametrize("optimizer", ["adam", "sgd"])
def test_zero_learning_rate_keeps_parameters(optimizer):
    model = models_assignment["Dir-SNN"](n_layers=2, width=4, classes=2)
    data = [_samples(four_node, model, count=6)]
    params = dirsnn.init_model_parameters(model, seed=3)

    trained, _ = training.train(
        model, data, params=params, epochs=3, batch=2, learning_rate=0.0, optimizer=optimizer
    )

    assert all(np.array_equal(trained[name], params[name]) for name in params)


def test_separable_dataset_is_learned():
    model = dirsnn.source_localization_model(n_layers=1, width=8, classes=2, in_features=2)
    rng = np.random.default_rng(0)
    labels = np.arange(20) % 2
    inputs = rng.normal(0, 0.1, size=(20, four_node.count(1), 2))
    # First feature column is the label
    inputs[:, :, 0] = labels[:, None]
    data = [training.GraphSamples.from_complex(four_node, model, {1: inputs}, labels)]

    _, trace = training.train(model, data, epochs=200, batch=8, learning_rate=0.02)

    assert trace.last("train")["accuracy"] == 1.0


def test_training_errors():
    model = models_assignment["Dir-SNN"](n_layers=1, width=4, classes=2)
    data = [_samples(four_node, model)]

    with pytest.raises(ValueError):
        training.train(model, data, epochs=1, optimizer="newton")

    wrong_labels = training.GraphSamples(data[0].plan, data[0].inputs, [5] * len(data[0]))
    with pytest.raises(ValueError):
        training.train(model, [wrong_labels], epochs=1)

    huge = training.GraphSamples(data[0].plan, {1: np.full((6, 5, 1), np.inf)}, data[0].labels)
    with pytest.raises(NonFiniteLoss):
        training.train(model, [huge], epochs=1)


def test_dirgnn_gives_same_logits_on_dwl_equivalent_digraphs():
    model = baselines.dirgnn_model(n_layers=2, width=6, classes=2, project_edges=False)
    complexes = [lift_directed_flag(g) for g in circulant_pair]

    for seed in range(3):
        params = dirsnn.init_model_parameters(model, seed=seed)
        logits = [
            dirsnn.model_forward(K, model, params, {0: np.ones((K.count(0), 1))}) for K in complexes
        ]
        assert np.allclose(logits[0], logits[1])


def test_dirsnn_separates_lifts_of_dwl_equivalent_digraphs():
    model = dirsnn.expressivity_model(n_layers=2, width=6)
    complexes = [lift_directed_flag(g) for g in circulant_pair]
    params = dirsnn.init_model_parameters(model, seed=0)

    logits = [
        dirsnn.model_forward(K, model, params, {dim: np.ones((K.count(dim), 1)) for dim in model.dims})
        for K in complexes
    ]

    assert not np.allclose(logits[0], logits[1])


def test_dirgnn_engine_matches_direct_formula():
    g = circulant_pair[0]
    K = lift_directed_flag(g)
    model = baselines.dirgnn_model(n_layers=1, width=3, classes=2, project_edges=False)
    params = dirsnn.init_model_parameters(model, seed=2)
    x = np.random.default_rng(0).normal(size=(g.n, 1))

    plan = dirsnn.build_plan(K, model)
    engine = network.hidden_states(plan, params, {0: x})[1][0][0]
    direct = baselines.dirgnn_forward(g, baselines.dirgnn_layer_params(params), x)

    assert np.allclose(engine, direct)


def test_snn_and_gcn_single_layers():
    x = np.ones((four_node.count(1), 2))
    params = {"self": np.eye(2), "undirected_lower": np.zeros((2, 2)), "bias": np.zeros(2)}

    assert np.allclose(baselines.snn_forward(four_node, params, x), x)

    node_x = baselines.edge_to_node_projection(four_node) @ x
    gcn = baselines.gcn_forward(four_node, {"weight": np.eye(2), "bias": np.zeros(2)}, node_x, "identity")
    assert gcn.shape == (4, 2)


def test_lower_relation_operator_is_used_by_term():
    model = dirsnn.source_localization_model(n_layers=1, width=2, classes=2)
    plan = dirsnn.build_plan(four_node, model)
    term = next(term for term in plan.layers[0].terms[1] if term.name == "down_1_0_1")

    expected = lower_adjacency(four_node, 1, 1, 0, 1).message_matrix()
    assert (term.operator != expected).nnz == 0
