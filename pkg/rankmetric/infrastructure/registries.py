import logging
import os
from abc import ABC, abstractmethod
from os.path import join, abspath, relpath, normpath, dirname, exists
from typing import Sequence, Any

log = logging.getLogger("rankLogger")


class FileRegistry(ABC):

    def __init__(self, workdir: str) -> None:
        self.workdir = workdir

    @abstractmethod
    def as_dict(self) -> dict:
        pass

    @abstractmethod
    def build_tree(self, *args, **kwargs) -> None:
        pass

    @abstractmethod
    def get(self, *args: Sequence[str]) -> Any:
        pass

    def abs(self, *paths: Sequence[str]) -> str:
        _path = normpath(abspath(join(self.workdir, *paths)))
        return _path

    def abs_dir(self, *paths: Sequence[str]) -> str:
        _path = normpath(abspath(join(self.workdir, *paths)))
        _dir = dirname(_path)
        return _dir

    def rel(self, *paths: Sequence[str]) -> str:
        """Gets the path of a file relative to the working dir."""

        _abspath = normpath(abspath(join(self.workdir, *paths)))
        _relpath = relpath(_abspath, self.workdir)
        return _relpath

    def file_exists(self, *args: Sequence[str]):
        file_abspath = self.get(*args)
        return exists(file_abspath)


class SimulationRegistry(FileRegistry):
    """
    Keeps track of the files produced by a simulation run: the results table, the summary
    report, the resolved configuration and the log.
    """

    def __init__(self, workdir: str, run_dir: str = "results") -> None:
        """

        Args:
            workdir: The working directory of the simulation.
            run_dir: The directory in which the results will be stored.
        """
        super().__init__(workdir)
        self.run_dir = run_dir
        self.logger = None
        self.paths = {
            "results": "results.csv",
            "report": "report.md",
            "config": "repr_config.yml",
        }

    def as_dict(self) -> dict:
        return {"path": self.workdir, "run_dir": self.run_dir}

    def build_tree(self) -> None:
        """Creates the run directory."""
        os.makedirs(self.abs(self.run_dir), exist_ok=True)
        log.debug(f"Run directory: {self.abs(self.run_dir)}")

    def get(self, *args: Sequence[str]) -> str:
        """
        Absolute path of a registered run file, e.g. ``get("results")``.
        """
        key = args[0]
        if key not in self.paths:
            raise KeyError(f"Unknown run file '{key}', choose from {sorted(self.paths)}")
        return self.abs(self.run_dir, self.paths[key])
