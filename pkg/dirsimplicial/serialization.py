"""Files read and written by the library.

    - Complex file. Header ``dims D``, then one simplex per line (``v0 v1 ... vk``), dimensions ascending,
      lexicographic order inside dimension.
    - Digraph file. Header ``n N``, then one directed edge per line (``u v``).
    - Relation file. Header ``dim k i j direction``, then one witness per line
      (``sigma tau kappa_dim kappa``).
    - Checkpoint. Versioned binary file with named float64 weights.
    - Dataset. Binary file with signals and CSV file with labels.

Text files use ASCII decimal numbers separated by spaces and LF line endings. Lines starting with ``#`` and
empty lines are ignored when reading.

Examples:
=========

    >>> from dirsimplicial.complex_core import build_complex
    >>> K = build_complex([(0, 1, 2)])
    >>> print(dumps_complex(K), end="")
    dims 2
    0
    1
    2
    0 1
    0 2
    1 2
    0 1 2
    >>> loads_complex(dumps_complex(K)) == K
    True
"""

from __future__ import annotations
from typing import Any, Iterator, NamedTuple
from pathlib import Path
import json
import struct

import numpy as np
import pandas as pd
import mylogging

from .adjacency import AdjacencyRelation, AdjacencySpec
from .complex_core import DirectedSimplicialComplex, build_complex
from .flag_lift import Digraph, UndirectedGraph
from .models.network import Parameters
from ._errors import DuplicateVertexInTuple, ParseError

CHECKPOINT_MAGIC = b"DSNNCKPT"
CHECKPOINT_VERSION = 1
DATASET_MAGIC = b"DSNNDATA"
DATASET_VERSION = 1


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, line in enumerate(text.split("\n"), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield number, line.split()


def _integers(tokens: list[str], number: int, path: str | None) -> list[int]:
    try:
        values = [int(token) for token in tokens]
    except ValueError:
        raise ParseError(f"Expected integers, got '{' '.join(tokens)}'.", number, path) from None
    if any(value < 0 for value in values):
        raise ParseError("Negative numbers are not allowed.", number, path)
    return values


def _header(lines: Iterator[tuple[int, list[str]]], keyword: str, path: str | None) -> int:
    first = next(lines, None)
    if first is None:
        raise ParseError(f"Empty file, header '{keyword} <number>' expected.", 1, path)
    number, tokens = first
    if len(tokens) != 2 or tokens[0] != keyword:
        raise ParseError(f"Header '{keyword} <number>' expected, got '{' '.join(tokens)}'.", number, path)
    if tokens[1] == "-1":
        return -1
    return _integers(tokens[1:], number, path)[0]


def _read_text(path: str | Path) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("ascii")
    except UnicodeDecodeError as error:
        line = data.count(b"\n", 0, error.start) + 1
        raise ParseError(
            f"Byte 0x{data[error.start]:02x} is not ASCII, file must be ASCII text.", line, str(path)
        ) from None


def _write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as file:
        file.write(text)


##############
### Complex
##############


def dumps_complex(K: DirectedSimplicialComplex) -> str:
    lines = [f"dims {K.dim}"]
    lines.extend(" ".join(str(vertex) for vertex in simplex) for simplex in K)
    return "\n".join(lines) + "\n"


def loads_complex(text: str, path: str | None = None) -> DirectedSimplicialComplex:
    """Parse complex file content. Missing faces are added with warning.

    Raises:
        ParseError: With number of wrong line.
    """
    lines = _lines(text)
    dims = _header(lines, "dims", path)
    generators = []

    for number, tokens in lines:
        simplex = _integers(tokens, number, path)
        if len(simplex) - 1 > dims:
            raise ParseError(
                f"Simplex of dimension {len(simplex) - 1} in complex with dims {dims}.", number, path
            )
        if len(set(simplex)) != len(simplex):
            raise ParseError(f"Vertex repeated in {tuple(simplex)}.", number, path)
        generators.append(tuple(simplex))

    n_vertices = max((max(simplex) for simplex in generators), default=-1) + 1

    try:
        K = build_complex(generators, n_vertices=n_vertices)
    except DuplicateVertexInTuple as err:
        raise ParseError(str(err), None, path) from err

    if len(K) != len(set(generators)):
        mylogging.warn(f"Complex {path or ''} was not closed under faces. Missing faces were added.")
    if K.dim != dims:
        raise ParseError(f"Header says dims {dims}, but maximal simplex dimension is {K.dim}.", 1, path)

    return K


def write_complex(K: DirectedSimplicialComplex, path: str | Path) -> None:
    _write_text(path, dumps_complex(K))


def read_complex(path: str | Path) -> DirectedSimplicialComplex:
    return loads_complex(_read_text(path), str(path))


##############
### Graphs
##############


def dumps_graph(g: Digraph | UndirectedGraph) -> str:
    lines = [f"n {g.n}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"


def loads_graph(text: str, directed: bool = True, path: str | None = None) -> Digraph | UndirectedGraph:
    """Parse digraph file content. With ``directed=False`` edges are read as undirected.

    Examples:
        >>> loads_graph("n 3\\n# cycle\\n0 1\\n1 2\\n2 0\\n")
        Digraph(n=3, edges=[(0, 1), (1, 2), (2, 0)])
    """
    lines = _lines(text)
    n = _header(lines, "n", path)
    edges = []

    for number, tokens in lines:
        edge = _integers(tokens, number, path)
        if len(edge) != 2:
            raise ParseError(f"Edge line must contain two vertices, got {len(edge)}.", number, path)
        if edge[0] == edge[1]:
            raise ParseError(f"Self loop on vertex {edge[0]}.", number, path)
        if max(edge) >= n:
            raise ParseError(f"Vertex {max(edge)} out of range for {n} vertices.", number, path)
        edges.append(edge)

    return Digraph(n, edges) if directed else UndirectedGraph(n, edges)


def write_graph(g: Digraph | UndirectedGraph, path: str | Path) -> None:
    _write_text(path, dumps_graph(g))


def read_graph(path: str | Path, directed: bool = True) -> Digraph | UndirectedGraph:
    return loads_graph(_read_text(path), directed, str(path))


##############
### Relations
##############


def dumps_relation(relation: AdjacencyRelation) -> str:
    spec = relation.spec
    lines = [f"{relation.dim} {spec.k} {spec.i} {spec.j} {spec.direction}"]
    lines.extend(f"{sigma} {tau} {relation.kappa_dim} {kappa}" for sigma, tau, kappa in relation.witnesses)
    return "\n".join(lines) + "\n"


class RelationFile(NamedTuple):
    spec: AdjacencySpec
    dim: int
    kappa_dim: int
    witnesses: np.ndarray


def loads_relation(text: str, path: str | None = None) -> RelationFile:
    lines = _lines(text)
    first = next(lines, None)
    if first is None or len(first[1]) != 5 or first[1][4] not in ("down", "up"):
        raise ParseError("Header 'dim k i j direction' expected.", first[0] if first else 1, path)
    number, tokens = first
    dim, k, i, j = _integers(tokens[:4], number, path)

    witnesses, kappa_dims = [], set()
    for number, tokens in lines:
        values = _integers(tokens, number, path)
        if len(values) != 4:
            raise ParseError("Witness line must be 'sigma tau kappa_dim kappa'.", number, path)
        witnesses.append((values[0], values[1], values[3]))
        kappa_dims.add(values[2])

    if len(kappa_dims) > 1:
        raise ParseError(f"Witnesses of different dimensions {sorted(kappa_dims)}.", None, path)

    return RelationFile(
        AdjacencySpec(first[1][4], k, i, j),  # type: ignore
        dim,
        kappa_dims.pop() if kappa_dims else -1,
        np.array(witnesses, dtype=np.int64).reshape(-1, 3),
    )


def write_relation(relation: AdjacencyRelation, path: str | Path) -> None:
    _write_text(path, dumps_relation(relation))


##############
### Checkpoints
##############


def save_parameters(params: dict[str, np.ndarray], path: str | Path, metadata: dict | None = None) -> None:
    """Save weights into versioned binary file.

    Layout (little endian): magic, uint32 version, uint32 metadata length, metadata JSON, uint32 number of
    arrays, then for every array (sorted by name) uint16 name length, name, uint8 ndim, uint32 dims. Values of
    all arrays follow in the same order as float64.
    """
    names = sorted(params)
    metadata_bytes = json.dumps(metadata or {}, sort_keys=True).encode("utf-8")

    with open(path, "wb") as file:
        file.write(CHECKPOINT_MAGIC)
        file.write(struct.pack("<II", CHECKPOINT_VERSION, len(metadata_bytes)))
        file.write(metadata_bytes)
        file.write(struct.pack("<I", len(names)))

        for name in names:
            encoded = name.encode("utf-8")
            shape = np.shape(params[name])
            layout = f"<H{len(encoded)}sB{len(shape)}I"
            header = struct.pack(layout, len(encoded), encoded, len(shape), *shape)
            file.write(header)

        for name in names:
            file.write(np.ascontiguousarray(params[name], dtype="<f8").tobytes())


def load_parameters(path: str | Path) -> tuple[Parameters, dict[str, Any]]:
    """Load weights saved with `save_parameters`.

    Raises:
        ParseError: If file is not checkpoint, has unknown version or is truncated.
    """
    data = Path(path).read_bytes()
    path = str(path)

    if not data.startswith(CHECKPOINT_MAGIC):
        raise ParseError("Not a checkpoint file.", None, path)

    try:
        offset = len(CHECKPOINT_MAGIC)
        version, metadata_length = struct.unpack_from("<II", data, offset)
        if version != CHECKPOINT_VERSION:
            raise ParseError(f"Unsupported checkpoint version {version}.", None, path)
        offset += 8
        metadata = json.loads(data[offset : offset + metadata_length].decode("utf-8"))
        offset += metadata_length
        (count,) = struct.unpack_from("<I", data, offset)
        offset += 4

        table = []
        for _ in range(count):
            (name_length,) = struct.unpack_from("<H", data, offset)
            offset += 2
            name = data[offset : offset + name_length].decode("utf-8")
            offset += name_length
            (ndim,) = struct.unpack_from("<B", data, offset)
            offset += 1
            shape = struct.unpack_from(f"<{ndim}I", data, offset)
            offset += 4 * ndim
            table.append((name, shape))

        params = Parameters()
        for name, shape in table:
            size = int(np.prod(shape, dtype=np.int64))
            params[name] = np.frombuffer(data, dtype="<f8", count=size, offset=offset).reshape(shape).copy()
            offset += 8 * size

    except (struct.error, ValueError) as err:
        if isinstance(err, ParseError):
            raise
        raise ParseError(f"Checkpoint is truncated or corrupted. {err}", None, path) from err

    if offset != len(data):
        raise ParseError("Unexpected data after last array.", None, path)

    return params, metadata


##############
### Datasets
##############


class DatasetFile(NamedTuple):
    signals: np.ndarray
    labels: np.ndarray
    orders: np.ndarray
    snr_db: float
    seed: int
    directed: bool


def labels_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_labels.csv")


def save_dataset(
    signals: np.ndarray,
    labels: np.ndarray,
    orders: np.ndarray,
    path: str | Path,
    snr_db: float,
    seed: int,
    directed: bool,
) -> None:
    """Save signals of shape (count, edges) into binary file and labels into csv next to it.

    Header (little endian) is magic, uint32 version, int64 edges, int64 features, int64 count, float64 SNR,
    int64 seed, uint8 mode (1 directed). Records are float64 signals.
    """
    signals = np.asarray(signals, dtype=np.float64).reshape(len(labels), -1)
    count, n_edges = signals.shape

    with open(path, "wb") as file:
        file.write(DATASET_MAGIC)
        file.write(struct.pack("<IqqqdqB", DATASET_VERSION, n_edges, 1, count, snr_db, seed, int(directed)))
        file.write(np.ascontiguousarray(signals, dtype="<f8").tobytes())

    pd.DataFrame({"sample": np.arange(count), "label": labels, "t": orders}).to_csv(
        labels_path(path), index=False, lineterminator="\n"
    )


def load_dataset(path: str | Path) -> DatasetFile:
    data = Path(path).read_bytes()
    header = struct.Struct("<IqqqdqB")

    if not data.startswith(DATASET_MAGIC):
        raise ParseError("Not a dataset file.", None, str(path))
    try:
        version, n_edges, features, count, snr_db, seed, mode = header.unpack_from(data, len(DATASET_MAGIC))
    except struct.error:
        raise ParseError("Dataset header is truncated.", None, str(path)) from None
    if version != DATASET_VERSION:
        raise ParseError(f"Unsupported dataset version {version}.", None, str(path))

    offset = len(DATASET_MAGIC) + header.size
    expected = count * n_edges * features
    if len(data) - offset != 8 * expected:
        raise ParseError(f"Expected {expected} values, file is truncated or too long.", None, str(path))

    signals = np.frombuffer(data, dtype="<f8", offset=offset).reshape(count, n_edges).copy()
    labels_df = pd.read_csv(labels_path(path))
    if len(labels_df) != count:
        raise ParseError(
            f"Labels file has {len(labels_df)} rows, {count} expected.", None, str(labels_path(path))
        )

    return DatasetFile(
        signals,
        labels_df["label"].to_numpy(dtype=np.int64),
        labels_df["t"].to_numpy(dtype=np.int64),
        float(snr_db),
        int(seed),
        bool(mode),
    )
