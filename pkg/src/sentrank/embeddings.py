"""Dense embedding table: text vector file loading and cosine similarity.

Embeddings are an input artifact computed elsewhere; the file format is
the common text vector layout: a `<count> <dim>` header followed by one
`<key> <v1> ... <vdim>` line per entry.
"""

from typing import Dict, Iterable, Mapping

import numpy as np

from .errors import EmbeddingLoadError, LookupMissError, ZeroVectorError


class EmbeddingTable:
    """Immutable key -> vector mapping with O(1) lookup.

    Vectors are stored as float32; similarity math accumulates in
    float64. `duplicates` counts keys that appeared more than once while
    loading (last occurrence wins).
    """

    def __init__(self, dim: int, vectors: Mapping[str, np.ndarray], duplicates: int = 0):
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = dim
        self.duplicates = duplicates
        self._vectors: Dict[str, np.ndarray] = {}
        for key, vec in vectors.items():
            arr = np.asarray(vec, dtype=np.float32)
            if arr.shape != (dim,):
                raise ValueError(f"vector for {key!r} has shape {arr.shape}, expected ({dim},)")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"vector for {key!r} contains NaN/Inf")
            arr.flags.writeable = False
            self._vectors[key] = arr

    def __contains__(self, key: str) -> bool:
        return key in self._vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def keys(self) -> Iterable[str]:
        return self._vectors.keys()

    def vector(self, key: str) -> np.ndarray:
        try:
            return self._vectors[key]
        except KeyError:
            raise LookupMissError(f"no embedding for key {key!r}") from None

    def matrix(self, keys: Iterable[str]) -> np.ndarray:
        """Stack vectors for `keys` into a (len(keys), dim) float64 array."""
        return np.array([self.vector(k) for k in keys], dtype=np.float64)


def load_vectors(path) -> EmbeddingTable:
    """Parse a text vector file into an EmbeddingTable.

    Raises EmbeddingLoadError naming the offending line on a malformed
    header or a line with the wrong number of components. Duplicate keys
    keep the last vector and bump the table's duplicate counter.
    """
    vectors: Dict[str, np.ndarray] = {}
    duplicates = 0
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise EmbeddingLoadError(f"{path}:1: malformed header {header.strip()!r}")
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise EmbeddingLoadError(f"{path}:1: non-integer header {header.strip()!r}") from None
        if dim <= 0 or count < 0:
            raise EmbeddingLoadError(f"{path}:1: invalid header values {header.strip()!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != dim + 1:
                raise EmbeddingLoadError(
                    f"{path}:{lineno}: expected {dim + 1} fields, got {len(fields)}"
                )
            key = fields[0]
            try:
                vec = np.array(fields[1:], dtype=np.float32)
            except ValueError:
                raise EmbeddingLoadError(f"{path}:{lineno}: non-numeric component") from None
            if key in vectors:
                duplicates += 1
            vectors[key] = vec
    return EmbeddingTable(dim=dim, vectors=vectors, duplicates=duplicates)


def cosine(u: str, v: str, table: EmbeddingTable) -> float:
    """Cosine similarity of two stored vectors, accumulated in float64."""
    a = table.vector(u).astype(np.float64)
    b = table.vector(v).astype(np.float64)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError(f"cosine undefined for zero vector ({u!r} or {v!r})")
    return float(np.dot(a, b) / (na * nb))
