import json
from fractions import Fraction

import numpy as np
import pandas as pd

from .polynomial import IntPolynomial

SCHEMA = 1
COLUMNS = ["suite", "name", "passed", "measured", "expected", "tolerance"]


def _plain(value):
    # JSON-ready copy of a measured or expected value
    if isinstance(value, IntPolynomial):
        return value.to_json()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class VerificationReport(object):
    """
    Collection of named pass/fail checks with their measured values.
    Returned by the consistency checks, FiberVerifier suites and selftest.
    """

    def __init__(self, title, config=None, seed=None, tolerances=None):
        self.title = title
        self.config = config
        self.seed = seed
        self.tolerances = tolerances
        self.checks = []

    def add(self, name, passed, measured=None, expected=None, tolerance=None, suite=None):
        """
        Record one check.

        :param name: check name
        :param passed: bool
        :param measured: observed value (number, list, polynomial, ...)
        :param expected: expected value, if any
        :param tolerance: tolerance the check was run with, if numeric
        :param suite: group name; defaults to the report title
        :return: passed, as a bool
        """
        passed = bool(passed)
        self.checks.append(
            {
                "suite": suite or self.title,
                "name": name,
                "passed": passed,
                "measured": _plain(measured),
                "expected": _plain(expected),
                "tolerance": None if tolerance is None else float(tolerance),
            }
        )
        return passed

    def __len__(self):
        return len(self.checks)

    def __iter__(self):
        return iter(self.checks)

    def __repr__(self):
        status = "passed" if self.passed else f"{len(self.failures())} failed"
        return f"VerificationReport({self.title!r}: {len(self)} checks, {status})"

    @property
    def passed(self):
        return all(c["passed"] for c in self.checks)

    def failures(self):
        """
        Checks that did not pass.
        :return: list of check dicts
        """
        return [c for c in self.checks if not c["passed"]]

    def to_frame(self):
        """
        Checks as a DataFrame; measured and expected values are JSON strings so the
        table stays writable as parquet.
        """
        rows = [
            {
                **c,
                "measured": json.dumps(c["measured"], sort_keys=True),
                "expected": json.dumps(c["expected"], sort_keys=True),
            }
            for c in self.checks
        ]
        return pd.DataFrame(rows, columns=COLUMNS)

    def stats(self):
        """
        Number of checks and passes per suite.
        :return: pandas Dataframe indexed by suite
        """
        df = self.to_frame()
        return df.groupby("suite").agg(checks=("passed", "count"), passed=("passed", "sum"))

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "title": self.title,
            "config": _plain(self.config),
            "seed": self.seed,
            "tolerances": _plain(self.tolerances),
            "passed": self.passed,
            "checks": self.checks,
        }

    def to_json(self):
        """Deterministic JSON: sorted keys, schema version, seed and tolerances embedded."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def save(self, filename, file_format="parquet"):
        """
        Saves the check table to the given file.

        :param filename: file name
        :param file_format: file format of saved object ['parquet', 'csv', 'pickle', 'json']
        :return: None
        """
        if file_format == "parquet":
            self.to_frame().to_parquet(filename)
        elif file_format == "pickle":
            self.to_frame().to_pickle(filename)
        elif file_format == "csv":
            self.to_frame().to_csv(filename, index=False)
        elif file_format == "json":
            with open(filename, "w") as f:
                f.write(self.to_json())
        else:
            raise ValueError(
                f"invalid format: '{file_format}' not in ['parquet', 'csv', 'pickle', 'json']"
            )

    def merge(self, title, *others):
        """
        Combine this report with others into a new one.

        :param title: title of the merged report
        :param others: VerificationReports
        :return: VerificationReport
        """
        merged = VerificationReport(title, self.config, self.seed, self.tolerances)
        for report in (self,) + others:
            merged.checks.extend(report.checks)
        return merged
