""" All config for dirsimplicial. You can setup generated data, compared models, training or what will be
printed. Setting can be inserted as function parameters, then it has higher priority.
All values are commented. You can use intellisense and help in docstrings, where you can find what options or
type should variable be and what it means.

Config is used in `main` functions (`bench`, `expressivity`, `dswl_test`...) and in command line interface,
where it can be also loaded from sectioned config file (check `_helpers.load_config_file`).

Examples:
=========

    >>> import dirsimplicial
    ...
    >>> config.update({"nodes": 30, "communities": 5, "used_models": ["Dir-SNN", "SNN"]})

    This is how you can access values

    >>> config.data_input.signals = 200

    You can access all attributes not only from subcategories, but also from root config.

    >>> config.signals = 300

    You can also use dict notation

    >>> config['signals'] = 300

    If you want to run more configurations in loop for example, you can create new instances of Config class,
    but you have to pass it then like function params

    >>> new_config = config.copy()  # or Config()
    >>> new_config.update({'seeds': 2, 'epochs': 10})
    >>> new_config.epochs
    10
"""

from __future__ import annotations
from pathlib import Path

from mypythontools.config import MyProperty, ConfigBase, ConfigStructured


class Config(ConfigStructured):
    """Config class. You should not use class itself, but created instance config."""

    def __init__(self, init_dict=None) -> None:
        self.general = self.General()
        self.complexes = self.Complexes()
        self.dswl = self.Dswl()
        self.model = self.Model()
        self.training = self.Training()
        self.data_input = self.DataInput()
        self.bench = self.Bench()
        self.output = self.Output()

        if init_dict:
            self.update(init_dict)

    class General(ConfigBase):
        """Various config values that doesn't fit into any other category."""

        @MyProperty(options=["desk", "paper", None])
        def use_config_preset(self) -> str | None:
            """
            Options:
                'desk', 'paper', None

            Default:
                None

            Edit some selected Config values, other remains the same, check `presets` on Config class.
            'desk' is small run that finish in minutes, 'paper' is full benchmark."""
            return None

        @MyProperty(int)
        def seed(self) -> int:
            """
            Type:
                int

            Default:
                0

            Base seed. Graph of run with seed index s is sampled with seed + s, so every run is reproducible."""
            return 0

        @MyProperty(options=["pool", None])
        def multiprocessing(self) -> None | str:
            """
            Options:
                'pool', None

            Default:
                None

            Run independent benchmark cells (model, snr, seed) in parallel. Results do not depend on it."""
            return None

        @MyProperty((int, None))
        def processes_limit(self) -> int | None:
            """
            Types:
                int | None

            Default:
                None

            Max number of concurrent processes. If None, then (CPUs - 1) is used"""
            return None

    class Complexes(ConfigBase):
        """How graphs are lifted into complexes."""

        @MyProperty(int)
        def max_dim(self) -> int:
            """
            Type:
                int

            Default:
                2

            Maximal simplex dimension of flag lift. 2 means nodes, edges and triangles."""
            return 2

        @MyProperty(bool)
        def directed(self) -> bool:
            """
            Type:
                bool

            Default:
                True

            Whether benchmark graphs are directed (directed flag complex and directed diffusion) or undirected."""
            return True

    class Dswl(ConfigBase):
        """Color refinement isomorphism test."""

        @MyProperty(options=["full", "reduced"])
        def variant(self) -> str:
            """
            Options:
                'full', 'reduced'

            Default:
                'full'

            'full' uses boundary, coboundary, lower and upper adjacencies, 'reduced' only boundary and upper
            adjacencies. Both give the same partitions."""
            return "full"

        @MyProperty((int, None))
        def max_rounds(self) -> int | None:
            """
            Types:
                int | None

            Default:
                None

            Stop refinement after this number of rounds even if not stable. None means until stable."""
            return None

        @MyProperty(bool)
        def dimension_tagged_init(self) -> bool:
            """
            Type:
                bool

            Default:
                False

            If True, initial color is simplex dimension, otherwise all simplices starts with the same color."""
            return False

    class Model(ConfigBase):
        """Compared models and their architecture."""

        @MyProperty(list)
        def used_models(self) -> list:
            """
            Type:
                list

            Default:
                ['Dir-SNN', 'SNN', 'Dir-GNN', 'GCN']

            Models compared in benchmark. Names are keys of `dirsimplicial.models.models_assignment`."""
            return ["Dir-SNN", "SNN", "Dir-GNN", "GCN"]

        @MyProperty(list)
        def layers_grid(self) -> list:
            """
            Type:
                list

            Default:
                [1, 2, 3]

            Number of layers tried in grid search. Best model on validation set is used."""
            return [1, 2, 3]

        @MyProperty(list)
        def width_grid(self) -> list:
            """
            Type:
                list

            Default:
                [16, 32, 64]

            Layer sizes tried in grid search."""
            return [16, 32, 64]

        @MyProperty((str, list))
        def relations(self) -> str | list:
            """
            Types:
                str | list

            Default:
                'source_localization'

            Adjacencies of Dir-SNN. Name of relation set ('source_localization', 'expressivity', 'full_k1') or
            list of relation names like ['down_1_0_1', 'up_1_2_0']."""
            return "source_localization"

        @MyProperty(bool)
        def use_boundary(self) -> bool:
            """
            Type:
                bool

            Default:
                False

            Whether Dir-SNN layer aggregates signals of facets."""
            return False

        @MyProperty(bool)
        def use_coboundary(self) -> bool:
            """
            Type:
                bool

            Default:
                False

            Whether Dir-SNN layer aggregates signals of cofaces."""
            return False

        @MyProperty(bool)
        def use_kappa(self) -> bool:
            """
            Type:
                bool

            Default:
                False

            Whether messages contain also signal of the shared simplex (kappa) if its dimension is used."""
            return False

        @MyProperty(bool)
        def per_face_boundary(self) -> bool:
            """
            Type:
                bool

            Default:
                False

            Separate boundary and coboundary weights for every face map position."""
            return False

        @MyProperty(options=["sum", "mean"])
        def aggregation(self) -> str:
            """
            Options:
                'sum', 'mean'

            Default:
                'sum'

            How messages of neighbours are aggregated."""
            return "sum"

        @MyProperty(options=["relu", "identity"])
        def nonlinearity(self) -> str:
            """
            Options:
                'relu', 'identity'

            Default:
                'relu'
            """
            return "relu"

        @MyProperty(list)
        def head_widths(self) -> list:
            """
            Type:
                list

            Default:
                []

            Hidden layers of MLP after readout. Empty list means single affine layer."""
            return []

    class Training(ConfigBase):
        """Optimization of models."""

        @MyProperty(float)
        def learning_rate(self) -> float:
            """
            Type:
                float

            Default:
                1e-3
            """
            return 1e-3

        @MyProperty(int)
        def epochs(self) -> int:
            """
            Type:
                int

            Default:
                100
            """
            return 100

        @MyProperty(int)
        def batch(self) -> int:
            """
            Type:
                int

            Default:
                32

            Mini batch size."""
            return 32

        @MyProperty(options=["adam", "sgd"])
        def optimizer(self) -> str:
            """
            Options:
                'adam', 'sgd'

            Default:
                'adam'
            """
            return "adam"

        @MyProperty(float)
        def beta_1(self) -> float:
            """
            Type:
                float

            Default:
                0.9

            Adam decay of first moment."""
            return 0.9

        @MyProperty(float)
        def beta_2(self) -> float:
            """
            Type:
                float

            Default:
                0.999

            Adam decay of second moment."""
            return 0.999

        @MyProperty(float)
        def adam_epsilon(self) -> float:
            """
            Type:
                float

            Default:
                1e-8
            """
            return 1e-8

    class DataInput(ConfigBase):
        """Generated source localization data."""

        @MyProperty(int)
        def nodes(self) -> int:
            """
            Type:
                int

            Default:
                70

            Number of nodes of stochastic block model graph. Must be divisible by `communities`."""
            return 70

        @MyProperty(int)
        def communities(self) -> int:
            """
            Type:
                int

            Default:
                10

            Number of communities. Task has communities + 1 classes (inter-community edges)."""
            return 10

        @MyProperty(float)
        def p_in(self) -> float:
            """
            Type:
                float

            Default:
                0.9

            Edge probability inside community."""
            return 0.9

        @MyProperty(float)
        def p_out(self) -> float:
            """
            Type:
                float

            Default:
                0.01

            Edge probability between communities."""
            return 0.01

        @MyProperty(int)
        def signals(self) -> int:
            """
            Type:
                int

            Default:
                1000

            Number of generated samples."""
            return 1000

        @MyProperty(int)
        def spike_edges(self) -> int:
            """
            Type:
                int

            Default:
                5

            Number of edges of source community that get the spike."""
            return 5

        @MyProperty(list)
        def snr_grid(self) -> list:
            """
            Type:
                list

            Default:
                [-10, -5, 0, 5, 10]

            Signal to noise ratios in decibels."""
            return [-10, -5, 0, 5, 10]

        @MyProperty(list)
        def split_ratios(self) -> list:
            """
            Type:
                list

            Default:
                [0.8, 0.1, 0.1]

            Train, validation and test share. Must sum to 1."""
            return [0.8, 0.1, 0.1]

        @MyProperty(int)
        def diffusion_cap(self) -> int:
            """
            Type:
                int

            Default:
                100

            Maximal diffusion order."""
            return 100

        @MyProperty(float)
        def student_t_df(self) -> float:
            """
            Type:
                float

            Default:
                10.0

            Degrees of freedom of Student-T distribution that diffusion order is drawn from."""
            return 10.0

    class Bench(ConfigBase):
        """Experiments and where results are stored."""

        @MyProperty(int)
        def seeds(self) -> int:
            """
            Type:
                int

            Default:
                5

            Number of repetitions with different seed. Results are averaged over them."""
            return 5

        @MyProperty((str, Path))
        def out(self) -> str | Path:
            """
            Types:
                str | pathlib.Path

            Default:
                'results'

            Folder where result files are stored."""
            return "results"

        @MyProperty(bool)
        def dry_run(self) -> bool:
            """
            Type:
                bool

            Default:
                False

            Only print planned runs, do not train anything."""
            return False

        @MyProperty(int)
        def expressivity_epochs(self) -> int:
            """
            Type:
                int

            Default:
                200

            Epochs of discrimination training in expressivity experiment."""
            return 200

        @MyProperty(float)
        def expressivity_learning_rate(self) -> float:
            """
            Type:
                float

            Default:
                0.01
            """
            return 0.01

        @MyProperty(int)
        def expressivity_layers(self) -> int:
            """
            Type:
                int

            Default:
                2
            """
            return 2

        @MyProperty(int)
        def expressivity_width(self) -> int:
            """
            Type:
                int

            Default:
                16
            """
            return 16

    class Output(ConfigStructured):
        """Setup outputs of main functions like logger or what should be printed."""

        def __init__(self) -> None:
            self.logger_subconfig = self.LoggerSubconfig()

        class LoggerSubconfig(ConfigBase):
            """Dirsimplicial uses mylogging library on background. Check it's documentation for more info."""

            @MyProperty(options=["DEBUG", "INFO", "WARNING", "ERROR", "FATAL"])
            def logger_level(self) -> str:
                """
                Options:
                    'DEBUG', 'INFO', 'WARNING', 'ERROR', 'FATAL'

                Default:
                    'WARNING'

                You can filter out logs based on level you configure. Use 'INFO' to see progress of long runs.
                """
                return "WARNING"

            @MyProperty(str, options=["once", "ignore", "always", "error"])
            def logger_filter(self):
                """
                Options:
                    'once', 'ignore', 'always', 'error'

                Default:
                    'once'

                For debug reasons - use proper level. If 'error', stops on first warning (log)."""
                return "once"

            @MyProperty([str, Path])
            def logger_output(self) -> str | Path:
                """
                Types:
                    str | pathlib.Path

                Default:
                    'console'

                Where logger messages are stored / printed. 'console' or path to file."""
                return "console"

            @MyProperty(bool)
            def logger_color(self) -> bool:
                """
                Type:
                    bool

                Default:
                    True

                Whether log output should be colored or not. Some terminals (eg. pytest log or CI/CD log) cannot
                displays colors and long symbols are displayed that are bad for readability."""
                return True

        @MyProperty(bool)
        def print_table(self) -> bool:
            """
            Type:
                bool

            Default:
                True

            Whether print table with results of bench and expressivity experiment."""
            return True

        @MyProperty(dict)
        def table_settings(self) -> dict:
            """
            Type:
                dict

            Default::

                {
                    "tablefmt": "grid",
                    "floatfmt": ".3f",
                    "numalign": "center",
                    "stralign": "center",
                }

            Configure table outputs. Check tabulate for what values can be. Options for `tablefmt` are for
            example `'grid', 'simple', 'pretty', 'psql'` or any other from tabulate library."""
            return {
                "tablefmt": "grid",
                "floatfmt": ".3f",
                "numalign": "center",
                "stralign": "center",
            }

    ###############
    ### Presets ###
    ###############

    ###!!! overwrite defined settings !!!###
    presets = {
        # Directed plus undirected bench has to finish within 15 minutes on one core
        "desk": {
            "nodes": 30,
            "communities": 5,
            "signals": 200,
            "split_ratios": [0.7, 0.1, 0.2],
            "snr_grid": [-5, 0, 5],
            "seeds": 2,
            "layers_grid": [2, 3],
            "width_grid": [32],
            "head_widths": [32],
            "epochs": 50,
            "batch": 16,
            "learning_rate": 0.01,
        },
        "paper": {
            "nodes": 70,
            "communities": 10,
            "signals": 1000,
            "snr_grid": [-10, -5, 0, 5, 10],
            "seeds": 5,
            "layers_grid": [1, 2, 3],
            "width_grid": [16, 32, 64],
            "epochs": 100,
        },
    }


config = Config()
