"""
Monte Carlo decoding experiments.

A :class:`Simulation` sweeps error budgets of a code, decoding ``trials`` seeded random
instances per budget, and classifies each trial as a success, a declared failure or a
miscorrection.
"""

import logging
import os
from os.path import abspath, dirname, join, relpath
from typing import List, Optional, Sequence, Tuple, Union

import pandas
import yaml

from rankmetric.channel import inject_rank_error, make_kk_received, random_codeword
from rankmetric.gabidulin import GabidulinCode, decode
from rankmetric.infrastructure.engine import Task, TaskGraph
from rankmetric.infrastructure.logger import LOG_NAME, add_fhandler
from rankmetric.infrastructure.registries import SimulationRegistry
from rankmetric.kk import KKCode, kk_decode
from rankmetric.utils.helpers import (
    NoAliasLoader,
    SplitMix64,
    correctable_budgets,
    derive_seed,
    parse_nested_dicts,
)

log = logging.getLogger("rankLogger")

MODES = ("gabidulin", "kk")
BUDGET_FIELDS = {"gabidulin": ("tau",), "kk": ("epsilon", "mu", "delta")}


class Simulation:
    """
    Budget sweep of a Gabidulin or KK decoder.

    Args:
        name (str): name of the simulation
        preset (str): named code (``g4``, ``g8``, ``g16``)
        code (dict): explicit code parameters (n, k, m, prime_poly, h), used without preset
        mode (str): ``gabidulin`` for additive rank errors, ``kk`` for lifted codewords with
            errors, erasures and deviations
        budgets: list of τ values or [ε, μ, δ] triples, or ``auto`` for every budget within
            the decoding radius
        trials (int): trials per budget
        seed (int): master seed; trial streams are derived from it
        workers (int): threads used to run the budget cells
        run_dir (str): results folder, relative to ``path``
        packet_limit (int): row limit applied before KK decoding
        key_solver (str): key-equation solver of the Gabidulin decoder
        **kwargs: ``path`` (working directory), ``logging`` (log file name or True),
            ``config_file``
    """

    def __init__(
        self,
        name: str = None,
        preset: str = None,
        code: dict = None,
        mode: str = "gabidulin",
        budgets: Union[str, Sequence] = "auto",
        trials: int = 100,
        seed: int = 0,
        workers: Optional[int] = None,
        run_dir: str = "results",
        packet_limit: Optional[int] = None,
        key_solver: str = "ribma",
        **kwargs,
    ) -> None:

        workdir = abspath(kwargs.get("path", os.getcwd()))
        self.name = name if name else "rankSim"
        self.registry = SimulationRegistry(workdir, run_dir)
        self.config_file = kwargs.get("config_file", None)

        if mode not in MODES:
            raise ValueError(f"Unknown mode '{mode}', choose from {MODES}")
        if int(trials) < 1:
            raise ValueError(f"Trial count must be positive, got {trials}")
        if preset is None and code is None:
            raise ValueError("A simulation needs either a preset or code parameters")

        self.preset = preset
        self.code = GabidulinCode.from_preset(preset) if preset else GabidulinCode.from_dict(code)
        self.mode = mode
        self.trials = int(trials)
        self.seed = int(seed)
        self.workers = workers
        self.packet_limit = packet_limit
        self.key_solver = key_solver
        self.budgets = self.parse_budgets(budgets)

        logger = kwargs.get("logging", False)
        if logger:
            self.registry.build_tree()
            filename = LOG_NAME if logger is True else logger
            self.registry.logger = self.registry.abs(run_dir, filename)
            log.info(f"Logging at {self.registry.logger}")
            add_fhandler(self.registry.logger)

        log.info(f"Setting up simulation {self.name}:")
        log.info(f"\tCode: ({self.code.n}, {self.code.k}) over GF(2^{self.code.m})")
        log.info(f"\tMode: {self.mode}")
        log.info(f"\tBudgets: {len(self.budgets)}")
        log.info(f"\tTrials per budget: {self.trials}")

        self.results: Optional[pandas.DataFrame] = None
        self.task_graph = None

    def parse_budgets(self, budgets) -> List[Tuple[int, ...]]:
        if budgets == "auto" or budgets is None:
            return correctable_budgets(self.code.d, self.mode)
        width = len(BUDGET_FIELDS[self.mode])
        parsed = []
        for b in budgets:
            b = (b,) if isinstance(b, int) else tuple(int(i) for i in b)
            if len(b) != width:
                raise ValueError(f"Budget {b} needs {width} entries in mode '{self.mode}'")
            parsed.append(b)
        return parsed

    @property
    def kk_code(self) -> KKCode:
        return KKCode(self.code, packet_limit=self.packet_limit, selection_seed=self.seed)

    def run_trial(self, budget: Tuple[int, ...], trial: int) -> str:
        """
        Runs one trial.

        Returns:
            ``success``, ``failure`` or ``miscorrection``
        """
        trial_seed = derive_seed(self.seed, *budget, trial)
        rng = SplitMix64(trial_seed)
        x = random_codeword(self.code, rng)
        channel_seed = rng.next_u64()
        if self.mode == "gabidulin":
            received, _ = inject_rank_error(self.code, x, budget[0], channel_seed)
            outcome = decode(self.code, received, key_solver=self.key_solver)
        else:
            received, _ = make_kk_received(self.code, x, *budget, channel_seed)
            outcome = kk_decode(self.kk_code, received)
        if not outcome.success:
            return "failure"
        return "success" if list(outcome.codeword) == list(x) else "miscorrection"

    def run_cell(self, budget: Tuple[int, ...]) -> dict:
        """Runs all trials of one budget."""
        counts = {"success": 0, "failure": 0, "miscorrection": 0}
        for trial in range(self.trials):
            counts[self.run_trial(budget, trial)] += 1
        row = dict(zip(BUDGET_FIELDS[self.mode], budget))
        row.update(
            trials=self.trials,
            successes=counts["success"],
            failures=counts["failure"],
            miscorrections=counts["miscorrection"],
            success_rate=counts["success"] / self.trials,
        )
        log.debug(f"Budget {budget}: {counts}")
        return row

    def set_tasks(self) -> None:
        """Creates one task per budget cell."""
        task_graph = TaskGraph(workers=self.workers)
        for budget in self.budgets:
            task_graph.add(Task(instance=self, method="run_cell", budget=budget))
        self.task_graph = task_graph

    def run(self) -> pandas.DataFrame:
        """
        Runs the task tree and stores the results table, the report and the resolved
        configuration in the run directory.
        """
        if self.task_graph is None:
            self.set_tasks()
        log.info(f"Running {self.task_graph.ntasks} tasks")
        rows = self.task_graph.run()
        self.results = pandas.DataFrame(rows)
        log.info("Calculation completed")

        self.registry.build_tree()
        self.write_results(self.registry.get("results"))
        self.to_yml(self.registry.get("config"))
        return self.results

    def to_csv(self) -> str:
        return self.results.to_csv(index=False, float_format="%.6f", lineterminator="\n")

    def write_results(self, filename: str) -> None:
        with open(filename, "w") as f_:
            f_.write(self.to_csv())
        log.info(f"Results written to {filename}")

    def as_dict(self, extra: dict = None) -> dict:
        """
        Converts the simulation into a dictionary readable by :meth:`from_yml`.
        """
        dict_walk = {
            "name": self.name,
            "config_file": self.config_file,
            "path": self.registry.workdir,
            "run_dir": self.registry.run_dir,
            "mode": self.mode,
            "trials": self.trials,
            "seed": self.seed,
            "budgets": [list(b) if len(b) > 1 else b[0] for b in self.budgets],
            "key_solver": self.key_solver,
        }
        if self.preset:
            dict_walk["preset"] = self.preset
        else:
            dict_walk["code"] = self.code.as_dict()
        if self.workers:
            dict_walk["workers"] = self.workers
        if self.packet_limit is not None:
            dict_walk["packet_limit"] = self.packet_limit
        dict_walk.update(extra or {})
        return parse_nested_dicts(dict_walk)

    def to_yml(self, filename: str, **kwargs) -> None:
        """
        Serializes the simulation into a .yml file, which :meth:`from_yml` reads back.
        """

        class NoAliasDumper(yaml.Dumper):
            def ignore_aliases(self, data):
                return True

        with open(filename, "w") as f_:
            yaml.dump(
                self.as_dict(**kwargs),
                f_,
                Dumper=NoAliasDumper,
                sort_keys=False,
                default_flow_style=False,
                indent=1,
                width=70,
            )

    @classmethod
    def from_yml(cls, config_yml: str, **kwargs) -> "Simulation":
        """
        Initializes a simulation from a .yml file. Keyword arguments override the file.

        Args:
            config_yml (str): The path to the .yml file
        """
        log.info("Initializing simulation from .yml file")
        with open(config_yml, "r") as yml:
            _dict = yaml.load(yml, NoAliasLoader) or {}
        _dir_yml = dirname(config_yml)
        _dict["path"] = abspath(join(_dir_yml, _dict.get("path", "")))
        _dict["config_file"] = relpath(config_yml, _dir_yml)
        _dict.update({k: v for k, v in kwargs.items() if v is not None})
        return cls(**_dict)
