#!/usr/bin/python

""" This is main module with experiments and command line interface.

It contain functions

- lift() - Lift graph file into complex file
- export_adjacency() - Store one adjacency relation of complex file
- dswl_test() - Decide whether two complexes are distinguished by color refinement
- expressivity() - Discrimination accuracy of Dir-GNN and Dir-SNN on digraphs that D-WL can not distinguish
- bench() - Source localization benchmark over SNR grid, model grid and seeds
- generate_dataset() - Store generated source localization data

Examples:
=========

    >>> result = expressivity(seeds=1, expressivity_epochs=5)
    >>> sorted(result.accuracies)
    ['Dir-GNN', 'Dir-SNN']

Command line usage::

    python -m dirsimplicial.main lift graph.txt --out complex.txt
    python -m dirsimplicial.main bench --profile desk --out results

Do not edit this file if you are user, it's not necessary! Only call function from here. The only file to edit is
configuration.py or your own config file.
"""

from __future__ import annotations
from typing import Sequence
import sys
from pathlib import Path
import argparse
import multiprocessing

import numpy as np
import pandas as pd
from tabulate import tabulate

import mylogging
import mypythontools

# Get module path and insert in sys path for working even if opened from other cwd (current working directory)
dirsimplicial_root_path = Path(__file__).resolve().parents[1]

if dirsimplicial_root_path.as_posix() not in sys.path:
    sys.path.insert(0, dirsimplicial_root_path.as_posix())

from dirsimplicial import _helpers, _main_loop, _result_classes, datagen, dswl, evaluate_predictions
from dirsimplicial import serialization
from dirsimplicial.adjacency import AdjacencySpec, adjacency_relation
from dirsimplicial.complex_core import DirectedSimplicialComplex
from dirsimplicial.configuration import Config, config as config_default
from dirsimplicial.flag_lift import Digraph, lift_directed_flag, lift_undirected_flag
from dirsimplicial.models import baselines, dirsnn, training
from dirsimplicial._errors import ConfigValidationError, IndexOutOfRange, ParseError


def counts_line(K: DirectedSimplicialComplex, max_dim: int | None = None) -> str:
    """Per dimension counts like ``0:4 1:5 2:1``. Empty dimensions up to max_dim are printed as zero."""
    last = K.dim if max_dim is None else max(max_dim, K.dim)
    return " ".join(f"{dim}:{K.count(dim)}" for dim in range(last + 1))


def lift(
    graph_file: str | Path,
    out: str | Path | None = None,
    directed: bool = True,
    max_dim: int = 2,
) -> tuple[DirectedSimplicialComplex, str]:
    """Lift graph file into directed flag complex (or flag complex if not directed).

    Args:
        graph_file (str | Path): Digraph file.
        out (str | Path | None, optional): If given, complex file is stored here. Defaults to None.
        directed (bool, optional): If False, edges are read as undirected. Defaults to True.
        max_dim (int, optional): Maximal simplex dimension. Defaults to 2.

    Raises:
        ParseError: With line number if graph file is invalid.

    Returns:
        tuple[DirectedSimplicialComplex, str]: Complex and its per dimension counts.
    """
    graph = serialization.read_graph(graph_file, directed)
    K = lift_directed_flag(graph, max_dim) if directed else lift_undirected_flag(graph, max_dim)

    if out is not None:
        serialization.write_complex(K, out)

    return K, counts_line(K, max_dim)


def export_adjacency(
    complex_file: str | Path,
    dim: int,
    spec: AdjacencySpec | str,
    out: str | Path | None = None,
) -> str:
    """Relation of complex file in coordinate list format. Stored into `out` if given."""
    K = serialization.read_complex(complex_file)
    spec = AdjacencySpec.from_name(spec) if isinstance(spec, str) else spec
    relation = adjacency_relation(K, dim, spec)

    if out is not None:
        serialization.write_relation(relation, out)

    return serialization.dumps_relation(relation)


def dswl_test(
    complex_a: str | Path | DirectedSimplicialComplex,
    complex_b: str | Path | DirectedSimplicialComplex,
    config: Config | dict | None = None,
    **kwargs,
) -> dswl.Verdict:
    """Run color refinement jointly on two complexes. Check `dswl` config subcategory for options."""
    config = _helpers.resolve_config(config, **kwargs)

    complexes = [
        K if isinstance(K, DirectedSimplicialComplex) else serialization.read_complex(K)
        for K in (complex_a, complex_b)
    ]
    verdict = dswl.distinguish(
        *complexes,
        variant=config.variant,
        max_rounds=config.max_rounds,
        dimension_tagged_init=config.dimension_tagged_init,
    )
    mylogging.info(f"Complexes are {verdict.label} after {verdict.rounds} rounds.")

    return verdict


def _discrimination_accuracy(
    model: dirsnn.ModelSpec,
    complexes: Sequence[DirectedSimplicialComplex],
    labels: Sequence[int],
    hyper: training.Hyperparameters,
) -> float:
    """Train model to tell complexes apart with constant features on every simplex of every working dimension
    and return accuracy on them."""
    groups = [
        training.GraphSamples(
            dirsnn.build_plan(K, model), {dim: np.ones((1, K.count(dim), 1)) for dim in model.dims}, [label]
        )
        for K, label in zip(complexes, labels)
    ]
    params, _ = training.train(model, groups, hyper=hyper)
    return training.evaluate(params, groups)[1]


def expressivity(
    config: Config | dict | None = None, swap_labels: bool = False, **kwargs
) -> _result_classes.ExpressivityResult:
    """Discrimination accuracy of Dir-GNN on pair of digraphs that D-WL can not distinguish and of Dir-SNN on their
    directed flag lifts.

    Pair is the first one found by `dswl.find_counterexample` (two regular circulant digraphs on six nodes).
    Dir-SNN uses lower (1, i, j)-adjacencies, upper (1, 2, 0)-adjacency, boundary and coboundary on nodes, edges
    and triangles. Accuracy is averaged over `seeds`.

    Args:
        config (Config | dict | None, optional): Settings as Config instance or dictionary. If None, then default
            config will be used. Defaults to None.
        swap_labels (bool, optional): Give the first digraph label 1. Defaults to False.
        **kwargs (dict, optional): Config values that have priority.

    Returns:
        _result_classes.ExpressivityResult: Accuracies per model and seed and table.
    """
    config = _helpers.resolve_config(config, **kwargs)

    pair = dswl.find_counterexample(n_max=6, n_min=6)
    if pair is None:
        raise RuntimeError(mylogging.return_str("No counterexample pair found."))

    complexes = [lift_directed_flag(graph, config.max_dim) for graph in pair]
    labels = [1, 0] if swap_labels else [0, 1]
    accuracies: dict[str, list[float]] = {"Dir-GNN": [], "Dir-SNN": []}

    for seed_index in range(config.seeds):
        seed = config.seed + seed_index
        hyper = training.Hyperparameters(
            learning_rate=config.expressivity_learning_rate,
            epochs=config.expressivity_epochs,
            batch=len(complexes),
            seed=seed,
        )
        options = {"n_layers": config.expressivity_layers, "width": config.expressivity_width, "classes": 2}

        models = {
            "Dir-GNN": baselines.dirgnn_model(**options, project_edges=False, seed=seed),
            "Dir-SNN": dirsnn.expressivity_model(**options, seed=seed),
        }
        for name, model in models.items():
            accuracies[name].append(_discrimination_accuracy(model, complexes, labels, hyper))

    table_df = pd.DataFrame(
        {
            "Model": list(accuracies),
            "Accuracy [%]": [100 * float(np.mean(values)) for values in accuracies.values()],
        }
    )
    tables = _result_classes.Tables(
        simple=tabulate(table_df.values, headers=table_df.columns, **config.table_settings),
        simple_table_df=table_df,
    )

    if config.print_table:
        print(f"\nDiscrimination accuracy of {pair[0]} and {pair[1]}\n\n{tables.simple}\n")

    return _result_classes.ExpressivityResult(accuracies, tables)


def _task_kwargs(config: Config, seed: int, snr_db: float) -> dict:
    return {
        "spec": datagen.SbmSpec(
            n=config.nodes,
            communities=config.communities,
            p_in=config.p_in,
            p_out=config.p_out,
            directed=config.directed,
            seed=seed,
        ),
        "count": config.signals,
        "snr_db": snr_db,
        "seed": seed,
        "spike_edges": config.spike_edges,
        "max_dim": config.max_dim,
        "diffusion_cap": config.diffusion_cap,
        "student_t_df": config.student_t_df,
    }


def bench(config: Config | dict | None = None, **kwargs) -> _result_classes.BenchResult:
    """Source localization benchmark.

    For every SNR and seed data are generated, every used model is grid searched on validation data and the
    selected one is evaluated on test data. Results are stored in `out` folder.

        - results.csv - model, snr_db, seed, accuracy
        - plot.csv - model, snr_db, mean, std (over seeds)
        - runs.jsonl - one record with config hash, selected parameters and metrics per cell
        - config.ini - used config

    Args:
        config (Config | dict | None, optional): Settings as Config instance or dictionary. If None, then default
            config will be used. Defaults to None.
        **kwargs (dict, optional): Config values that have priority.

    Returns:
        _result_classes.BenchResult: Tables, records and used config.
    """
    config = _helpers.resolve_config(config, **kwargs)
    config_hash = _helpers.config_hash(config)
    seeds = [config.seed + index for index in range(config.seeds)]

    planned = [
        (model, snr_db, seed) for model in config.used_models for snr_db in config.snr_grid for seed in seeds
    ]

    if config.dry_run:
        plan_df = pd.DataFrame(planned, columns=["model", "snr_db", "seed"])
        plan_df["layers"] = str(config.layers_grid)
        plan_df["width"] = str(config.width_grid)
        print(f"\nPlanned {len(plan_df)} runs\n\n{tabulate(plan_df.values, headers=plan_df.columns)}\n")
        empty = pd.DataFrame(columns=["model", "snr_db", "seed", "accuracy"])
        return _result_classes.BenchResult(empty, pd.DataFrame(), [], None, config, config_hash)

    config_dict = config.get_dict()
    results: dict = {}

    if config.multiprocessing == "pool":
        pool = multiprocessing.Pool(config.processes_limit or max(multiprocessing.cpu_count() - 1, 1))

        # It is not possible easy share data in multiprocessing, so results are resulted via callback function
        def return_result(result):
            for i, j in result.items():
                results[i] = j

    for snr_db in config.snr_grid:
        for seed in seeds:
            dataset = datagen.build_task(**_task_kwargs(config, seed, snr_db))
            split_indices = datagen.split(dataset.labels, config.split_ratios, seed)

            for model_name in config.used_models:
                cell_parameters = {
                    "config": config_dict,
                    "config_hash": config_hash,
                    "model_name": model_name,
                    "snr_db": snr_db,
                    "seed": seed,
                    "dataset": dataset,
                    "split_indices": split_indices,
                }

                if config.multiprocessing == "pool":
                    pool.apply_async(
                        _main_loop.train_and_evaluate, (), cell_parameters, callback=return_result
                    )
                else:
                    results.update(_main_loop.train_and_evaluate(**cell_parameters))

    if config.multiprocessing == "pool":
        pool.close()
        pool.join()

        for record in results.values():
            mylogging.my_logger.log_and_warn_from_lists(record.logs_list, record.warnings_list)

    records = [results[key] for key in planned]
    results_df = pd.DataFrame(
        [[record.model, record.snr_db, record.seed, record.accuracy] for record in records],
        columns=["model", "snr_db", "seed", "accuracy"],
    )
    plot_df = evaluate_predictions.summarize(results_df)

    tables = _result_classes.Tables(
        simple=tabulate(plot_df.values, headers=plot_df.columns, **config.table_settings),
        simple_table_df=plot_df,
    )

    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_settings = {"index": False, "float_format": "%.12g", "lineterminator": "\n"}
    results_df.to_csv(out / "results.csv", **csv_settings)
    plot_df.to_csv(out / "plot.csv", **csv_settings)
    with open(out / "runs.jsonl", "w", newline="\n") as runs_file:
        runs_file.writelines(record.to_json() + "\n" for record in records)
    with open(out / "config.ini", "w", newline="\n") as config_file:
        config_file.write(f"# config hash {config_hash}\n\n" + _helpers.dumps_config(config))

    if config.print_table:
        mode = "directed" if config.directed else "undirected"
        print(f"\nSource localization accuracy ({mode})\n\n{tables.simple}\n")

    return _result_classes.BenchResult(results_df, plot_df, records, tables, config, config_hash)


def generate_dataset(
    out: str | Path, snr_db: float | None = None, config: Config | dict | None = None, **kwargs
) -> datagen.Dataset:
    """Generate one source localization dataset and store it into `out` folder as graph.txt, complex.txt,
    signals.bin and signals_labels.csv. If `snr_db` is None, first value of `snr_grid` is used."""
    config = _helpers.resolve_config(config, **kwargs)
    snr_db = config.snr_grid[0] if snr_db is None else snr_db

    task_kwargs = _task_kwargs(config, config.seed, snr_db)
    dataset = datagen.build_task(**task_kwargs)

    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    serialization.write_graph(datagen.gen_sbm(task_kwargs["spec"]), out / "graph.txt")
    serialization.write_complex(dataset.complex, out / "complex.txt")
    serialization.save_dataset(
        dataset.signals,
        dataset.labels,
        np.array([sample.t for sample in dataset.samples]),
        out / "signals.bin",
        snr_db=snr_db,
        seed=config.seed,
        directed=config.directed,
    )

    return dataset


###########
### Command line
###########


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Sectioned config file.")
    parser.add_argument("--profile", choices=list(Config.presets), help="Config preset.")

    for key in config_default.get_dict():
        if key not in ("seed", "out"):
            parser.add_argument(f"--{key}", help=argparse.SUPPRESS)

    parser.add_argument("--seed")
    parser.add_argument("--out")


def _config_values(args: argparse.Namespace) -> dict:
    """Config file values, then command line values. Command line has priority."""
    values = _helpers.load_config_file(args.config) if args.config else {}
    known = config_default.get_dict()

    for key, value in vars(args).items():
        if key in known and value is not None:
            values[key] = mypythontools.misc.str_to_infer_type(value)

    if args.profile:
        values["use_config_preset"] = args.profile

    return values


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirsimplicial",
        description="Directed simplicial complexes, color refinement tests and simplicial networks.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    lift_parser = subparsers.add_parser("lift", help="Lift graph file into complex file.")
    lift_parser.add_argument("graph_file")
    lift_parser.add_argument("--out")
    lift_parser.add_argument("--undirected", action="store_true")
    lift_parser.add_argument("--max-dim", type=int, default=2)

    adjacency_parser = subparsers.add_parser("adjacency", help="Export adjacency relation of complex file.")
    adjacency_parser.add_argument("complex_file")
    adjacency_parser.add_argument("--dim", type=int, required=True)
    adjacency_parser.add_argument("--relation", required=True, help="Name like down_1_0_1 or up_1_2_0.")
    adjacency_parser.add_argument("--out")

    dswl_parser = subparsers.add_parser("dswl", help="Color refinement test of two complex files.")
    dswl_parser.add_argument("complex_a")
    dswl_parser.add_argument("complex_b")
    _add_config_arguments(dswl_parser)

    for name, help_text in [
        ("expressivity", "Discrimination accuracy of Dir-GNN and Dir-SNN."),
        ("bench", "Source localization benchmark."),
        ("datagen", "Generate source localization dataset."),
    ]:
        subparser = subparsers.add_parser(name, help=help_text)
        _add_config_arguments(subparser)
        if name == "datagen":
            subparser.add_argument("--snr", type=float)
        if name == "bench":
            subparser.add_argument("--dry-run", dest="dry_run", action="store_const", const="True")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Command line entry point. Return 0 on success, 2 on invalid input or config, 3 on runtime failure."""
    parser = _parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "lift":
            _, counts = lift(args.graph_file, args.out, not args.undirected, args.max_dim)
            print(counts)

        elif args.command == "adjacency":
            text = export_adjacency(args.complex_file, args.dim, args.relation, args.out)
            if args.out is None:
                print(text, end="")

        elif args.command == "dswl":
            print(dswl_test(args.complex_a, args.complex_b, **_config_values(args)).to_json())

        elif args.command == "expressivity":
            expressivity(**_config_values(args))

        elif args.command == "bench":
            bench(**_config_values(args))

        elif args.command == "datagen":
            values = _config_values(args)
            generate_dataset(values.pop("out", "dataset"), args.snr, **values)

    except (ParseError, ConfigValidationError, IndexOutOfRange, ValueError) as err:
        mylogging.traceback(f"Invalid input. {err}", level="ERROR")
        return 2

    except Exception as err:
        mylogging.traceback(f"Run failed. {err}", level="ERROR")
        return 3

    return 0


if __name__ == "__main__":
    sys.exit(main())
