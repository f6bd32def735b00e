import json
import logging
import os
from typing import List, Optional, Sequence, Tuple

from rankmetric.field import FieldSpec
from rankmetric.matrix import BitMatrix

log = logging.getLogger("rankLogger")


class MatrixParsers:
    """
    Text format of bit matrices.

    The first non-comment line holds ``rows cols``, optionally followed by the number of
    column blocks ``l`` of a Cartesian product matrix. Each following line is one row as a
    hexadecimal integer whose bit ``j`` is column ``j``. Lines starting with ``#`` are
    comments.
    """

    @staticmethod
    def read(filename: str) -> Tuple[BitMatrix, Optional[int]]:
        """
        Returns:
            The matrix and the declared number of blocks (None if absent).
        """
        with open(filename, "r") as f_:
            lines = [
                (no, line.strip())
                for no, line in enumerate(f_, start=1)
                if line.strip() and not line.lstrip().startswith("#")
            ]
        if not lines:
            raise ValueError(f"{filename}: empty matrix file")
        no, header = lines[0]
        tokens = header.split()
        if len(tokens) not in (2, 3):
            raise ValueError(f"{filename}:{no}: header must be 'rows cols [l]', got '{header}'")
        try:
            rows, cols = int(tokens[0]), int(tokens[1])
            blocks = int(tokens[2]) if len(tokens) == 3 else None
        except ValueError:
            raise ValueError(f"{filename}:{no}: non-integer header '{header}'")
        if len(lines) - 1 != rows:
            raise ValueError(f"{filename}: header declares {rows} rows, found {len(lines) - 1}")

        values = []
        for no, line in lines[1:]:
            try:
                value = int(line, 16)
            except ValueError:
                raise ValueError(f"{filename}:{no}: '{line}' is not a hexadecimal row")
            if value >> cols:
                raise ValueError(f"{filename}:{no}: row '{line}' is wider than {cols} columns")
            values.append(value)
        log.debug(f"Read {rows}x{cols} matrix from {filename}")
        return BitMatrix.from_ints(values, cols), blocks

    @staticmethod
    def format(matrix: BitMatrix, blocks: Optional[int] = None) -> str:
        header = f"{matrix.rows} {matrix.cols}" + (f" {blocks}" if blocks is not None else "")
        digits = max(1, (matrix.cols + 3) // 4)
        return "".join([header + "\n"] + [f"{v:0{digits}x}\n" for v in matrix.to_ints()])

    @staticmethod
    def write(filename: str, matrix: BitMatrix, blocks: Optional[int] = None) -> None:
        with open(filename, "w") as f_:
            f_.write(MatrixParsers.format(matrix, blocks))

    @staticmethod
    def sniff(filename: str) -> str:
        """``"vector"`` if the first data line is a comma-separated word, else ``"matrix"``."""
        with open(filename, "r") as f_:
            for line in f_:
                if line.strip() and not line.lstrip().startswith("#"):
                    return "vector" if "," in line else "matrix"
        raise ValueError(f"{filename}: empty input file")


class VectorParsers:
    """Words as comma-separated integers on one line."""

    @staticmethod
    def parse(text: str) -> List[int]:
        text = text.strip()
        if not text:
            return []
        try:
            return [int(v, 0) for v in text.replace(" ", "").split(",")]
        except ValueError:
            raise ValueError(f"Malformed vector '{text}'")

    @staticmethod
    def read(filename: str) -> List[int]:
        with open(filename, "r") as f_:
            content = "".join(
                line for line in f_ if line.strip() and not line.lstrip().startswith("#")
            )
        return VectorParsers.parse(content)

    @staticmethod
    def format(values: Sequence[int]) -> str:
        return ",".join(str(int(v)) for v in values)

    @staticmethod
    def write(filename: str, values: Sequence[int]) -> None:
        with open(filename, "w") as f_:
            f_.write(VectorParsers.format(values) + "\n")


def read_field_record(filename: str) -> FieldSpec:
    with open(filename, "r") as f_:
        for line in f_:
            if line.strip() and not line.lstrip().startswith("#"):
                return FieldSpec.from_text(line)
    raise ValueError(f"{filename}: no field record found")


def write_field_record(filename: str, spec: FieldSpec) -> None:
    with open(filename, "w") as f_:
        f_.write(spec.to_text() + "\n")


def sidecar_path(filename: str) -> str:
    return os.path.splitext(filename)[0] + ".json"


class InstanceSerializer:
    """Received matrix file paired with its JSON ground-truth sidecar."""

    @staticmethod
    def dump(filename: str, received: BitMatrix, truth: dict, blocks: Optional[int] = None):
        MatrixParsers.write(filename, received, blocks)
        with open(sidecar_path(filename), "w") as f_:
            json.dump(truth, f_, indent=2)
        log.debug(f"Instance written to {filename} with sidecar {sidecar_path(filename)}")

    @staticmethod
    def dump_word(filename: str, word: Sequence[int], truth: dict) -> None:
        VectorParsers.write(filename, word)
        with open(sidecar_path(filename), "w") as f_:
            json.dump(truth, f_, indent=2)

    @staticmethod
    def load_truth(filename: str) -> dict:
        if not os.path.isfile(sidecar_path(filename)):
            return {}
        with open(sidecar_path(filename), "r") as f_:
            return json.load(f_)

    @staticmethod
    def load(filename: str) -> Tuple[BitMatrix, Optional[int], dict]:
        received, blocks = MatrixParsers.read(filename)
        return received, blocks, InstanceSerializer.load_truth(filename)
