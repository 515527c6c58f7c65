"""Run parameter sweeps and compare their outputs against goldens.

A run executes one job per (variant, sweep, value) triple, writes each
job's tables under ``jobs/<job_id>/`` and then merges them, in sweep
order, into ``<variant>/<target>/<output>.csv``. The run directory is
named by the config hash, so a fixed config always lands in the same
place and produces the same bytes.

"""

from __future__ import absolute_import, division, unicode_literals

import typing

import copy
import logging
import os
import time
from collections import OrderedDict, namedtuple

import numpy
import six
from appdirs import user_data_dir
from fs import open_fs
from fs.base import FS
from fs.path import basename, dirname, join

from . import errors
from ._bulk import JobPool
from ._repr import make_repr
from ._version import __version__
from .config import RunConfig, SpectrumSettings, load_run_config
from .constants import WORKERS_ENV
from .dressed import diagonalize, parity_table, quadrature_rates
from .enums import Factor, Output
from .gme import assemble_liouvillian, steady_state
from .hamiltonian import build_model
from .output import (
    HEADERS,
    SPECTRUM_HEADER,
    eigenvalue_rows,
    p2_rows,
    parity_rows,
    read_csv,
    read_table,
    spectrum_rows,
    write_csv,
    write_json,
)
from .spectra import (
    annotate_peaks,
    normalize,
    photon_flux_table,
    probed_system,
    spectrum_qrt,
    spectrum_saa,
)

if typing.TYPE_CHECKING:
    from typing import Any, Dict, Iterator, List, Optional, Text, Union

    from .hamiltonian import ModelConfig


__all__ = [
    "CompareReport",
    "FileComparison",
    "Job",
    "RunManifest",
    "compare_goldens",
    "compute_outputs",
    "default_output_root",
    "plan_jobs",
    "resolve_workers",
    "run",
]

log = logging.getLogger("uscqed.sweep")

#: Target name used for the jobs of a run without sweeps.
SINGLE_POINT = "point"

#: One unit of work: a config and the outputs to compute from it.
Job = namedtuple(
    "Job", ["job_id", "variant", "target", "index", "value", "config", "outputs"]
)


def resolve_workers(flag=None, config=None):
    # type: (Optional[int], Optional[RunConfig]) -> int
    """Get the worker count: flag, then environment, then run file."""
    if flag is not None:
        return flag
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            workers = int(env)
        except ValueError:
            raise errors.ConfigError.single(
                WORKERS_ENV, "expected an integer, got {!r}".format(env)
            )
        if workers < 0:
            raise errors.ConfigError.single(WORKERS_ENV, "must be >= 0")
        return workers
    if config is not None and config.workers is not None:
        return config.workers
    return 0


def plan_jobs(config):
    # type: (RunConfig) -> List[Job]
    """Get every job of a run, in merge order."""
    jobs = []
    for variant in config.variants:
        if not config.sweeps:
            jobs.append(
                Job(
                    "{}-{}-0000".format(variant.name, SINGLE_POINT),
                    variant.name,
                    SINGLE_POINT,
                    0,
                    0.0,
                    variant.config,
                    config.outputs,
                )
            )
        for sweep in config.sweeps:
            for index, value in enumerate(sweep.values()):
                jobs.append(
                    Job(
                        "{}-{}-{:04d}".format(variant.name, sweep.target, index),
                        variant.name,
                        sweep.target.value,
                        index,
                        float(value),
                        sweep.apply(variant.config, value),
                        sweep.outputs,
                    )
                )
    return jobs


def compute_outputs(config, outputs, spectrum):
    # type: (ModelConfig, List[Output], SpectrumSettings) -> Dict[Output, Any]
    """Compute the requested outputs of one config.

    Eigenvalue, parity and quadrature outputs are arrays or tables;
    spectrum outputs are `~uscqed.spectra.SpectrumResult` objects.

    """
    results = OrderedDict()  # type: Dict[Output, Any]
    grid = spectrum.grid()
    if any(output is not Output.spectrum_saa for output in outputs):
        model = build_model(config)
        basis = diagonalize(model)
        if Output.eigenvalues in outputs:
            results[Output.eigenvalues] = basis.energies
        if Output.parity in outputs:
            results[Output.parity] = parity_table(basis)
        if Output.p2_table in outputs:
            results[Output.p2_table] = quadrature_rates(basis, model)
        if Output.spectrum_qrt in outputs:
            L = assemble_liouvillian(model, basis)
            result = spectrum_qrt(L, steady_state(L), omega_grid=grid)
            annotate_peaks(result, _flux_table(config, basis, model))
            results[Output.spectrum_qrt] = result
    if Output.spectrum_saa in outputs:
        result = spectrum_saa(config, grid)
        annotate_peaks(result, _flux_table(config, None, None))
        results[Output.spectrum_saa] = result
    if spectrum.normalize:
        for output in (Output.spectrum_qrt, Output.spectrum_saa):
            if output in results:
                results[output] = normalize(results[output])
    return results


def _flux_table(config, basis, model):
    # type: (ModelConfig, Any, Any) -> Any
    # sensor models are labelled by the transitions of the probed system
    if Factor.sensor not in config.model.atoms:
        return photon_flux_table(basis, model)
    system = build_model(probed_system(config))
    return photon_flux_table(diagonalize(system), system)


def _rows(output, value, result):
    # type: (Output, float, Any) -> List[Any]
    if output is Output.eigenvalues:
        return eigenvalue_rows(value, result)
    if output is Output.parity:
        return parity_rows(value, result)
    if output is Output.p2_table:
        return p2_rows(value, result)
    return spectrum_rows(value, result)


def _group_dir(job):
    # type: (Job) -> Text
    return join(job.variant, job.target)


def _run_job(job, spectrum, run_fs):
    # type: (Job, SpectrumSettings, FS) -> Dict[Text, Any]
    start = time.time()
    log.info("job %s started", job.job_id)
    results = compute_outputs(job.config, job.outputs, spectrum)
    job_dir = join("jobs", job.job_id)
    run_fs.makedirs(job_dir, recreate=True)
    paths = []
    for output, result in results.items():
        path = join(job_dir, "{}.csv".format(output))
        write_csv(run_fs, path, HEADERS[output], _rows(output, job.value, result))
        paths.append(path)
        if output.is_spectrum:
            spectra_dir = join(_group_dir(job), "spectra")
            run_fs.makedirs(spectra_dir, recreate=True)
            stem = join(spectra_dir, "{}-{:04d}".format(output, job.index))
            write_csv(
                run_fs,
                stem + ".csv",
                SPECTRUM_HEADER,
                zip(result.omega_grid, result.intensity),
            )
            sidecar = result.to_dict()
            sidecar.update(value=job.value, config=job.config.to_dict())
            write_json(run_fs, stem + ".json", sidecar)
            paths.extend([stem + ".csv", stem + ".json"])
    seconds = time.time() - start
    log.info("job %s finished in %.2fs", job.job_id, seconds)
    return {"outputs": paths, "seconds": seconds}


class RunManifest(object):
    """The record of a run.

    Attributes:
        config_hash (str): the run's config hash.
        version (str): the package version that produced the run.
        config (dict): the canonical config.
        jobs (list): one dict per job with ``job_id``, ``status``,
            ``outputs``, ``seconds`` and, on failure, ``error``.
        outputs (list): the merged tables.
        path (str): the run directory, relative to the output root.

    """

    FILENAME = "manifest.json"

    def __init__(self, config_hash, version, config, jobs, outputs, path):
        # type: (Text, Text, Dict[Text, Any], List[Dict[Text, Any]], List[Text], Text) -> None
        self.config_hash = config_hash
        self.version = version
        self.config = config
        self.jobs = jobs
        self.outputs = outputs
        self.path = path

    def __repr__(self):
        return make_repr("RunManifest", self.config_hash[:16], len(self.jobs))

    @property
    def failed(self):
        # type: () -> List[Dict[Text, Any]]
        """`list`: the records of failed jobs."""
        return [job for job in self.jobs if job["status"] != "ok"]

    @property
    def ok(self):
        # type: () -> bool
        """`bool`: `True` if every job succeeded."""
        return not self.failed

    def to_dict(self):
        # type: () -> Dict[Text, Any]
        return {
            "config_hash": self.config_hash,
            "version": self.version,
            "config": self.config,
            "jobs": self.jobs,
            "outputs": self.outputs,
        }

    def missing(self, run_fs):
        # type: (FS) -> List[Text]
        """Get listed files that are absent or empty in ``run_fs``."""
        listed = list(self.outputs)
        for job in self.jobs:
            if job["status"] == "ok":
                listed.extend(job["outputs"])
        return [
            path
            for path in listed
            if not run_fs.isfile(path) or run_fs.getsize(path) == 0
        ]


def _merge(run_fs, config, jobs, records):
    # type: (FS, RunConfig, List[Job], Dict[Text, Dict[Text, Any]]) -> List[Text]
    merged = []  # type: List[Text]
    groups = OrderedDict()  # type: Dict[Any, List[Job]]
    for job in jobs:
        groups.setdefault((job.variant, job.target), []).append(job)
    for (variant, target), members in groups.items():
        outputs = members[0].outputs
        for output in outputs:
            rows = []  # type: List[List[Text]]
            for job in sorted(members, key=lambda job: job.index):
                if records[job.job_id]["status"] != "ok":
                    continue
                job_csv = join("jobs", job.job_id, "{}.csv".format(output))
                _, job_rows = read_csv(run_fs, job_csv)
                rows.extend(job_rows)
            path = join(variant, target, "{}.csv".format(output))
            run_fs.makedirs(dirname(path), recreate=True)
            write_csv(run_fs, path, HEADERS[output], rows)
            merged.append(path)
    return merged


def default_output_root():
    # type: () -> Text
    """Get the directory runs are written to when no root is given."""
    return os.path.join(user_data_dir("uscqed"), "runs")


def _open_root(output_root):
    # type: (Union[FS, Text, None]) -> FS
    if isinstance(output_root, FS):
        return output_root
    if output_root is None:
        output_root = default_output_root()
    return open_fs(output_root, create=True)


def run(config, output_root=None, workers=None, normalize=None):
    # type: (Union[RunConfig, Text], Union[FS, Text, None], Optional[int], Optional[bool]) -> RunManifest
    """Execute every job of a run and write its outputs.

    Arguments:
        config (RunConfig or str): a parsed config, a run-file path or
            a ``recipe://<name>`` URL.
        output_root (FS or str, optional): where the run directory is
            created, defaults to the user data directory.
        workers (int, optional): worker threads, see `resolve_workers`.
        normalize (bool, optional): override the `[spectrum] normalize`
            setting of the config.

    Returns:
        RunManifest: the record of the run; failed jobs are marked and
        do not stop the others.

    Raises:
        ~uscqed.errors.ConfigError: if the config is invalid.

    """
    if not isinstance(config, RunConfig):
        config = load_run_config(config)
    if normalize is not None and normalize != config.spectrum.normalize:
        config = copy.copy(config)
        config.spectrum = SpectrumSettings(
            config.spectrum.omega_min,
            config.spectrum.omega_max,
            config.spectrum.n_points,
            normalize,
        )
    num_workers = resolve_workers(workers, config)
    run_path = config.config_hash[:16]
    jobs = plan_jobs(config)
    log.info("run %s: %d jobs on %d workers", run_path, len(jobs), num_workers)

    root_fs = _open_root(output_root)
    try:
        return _write_run(root_fs, run_path, config, jobs, num_workers)
    finally:
        if root_fs is not output_root:
            root_fs.close()


def _write_run(root_fs, run_path, config, jobs, num_workers):
    # type: (FS, Text, RunConfig, List[Job], int) -> RunManifest
    if root_fs.exists(run_path):
        root_fs.removetree(run_path)
    root_fs.makedirs(run_path)
    with root_fs.opendir(run_path) as run_fs:
        run_fs.writetext("config.toml", config.source, encoding="utf-8")
        with JobPool(num_workers, strict=False) as pool:
            for job in jobs:
                pool.submit(job.job_id, _run_job, job, config.spectrum, run_fs)

        records = OrderedDict()  # type: Dict[Text, Dict[Text, Any]]
        for job in jobs:
            record = OrderedDict(
                [
                    ("job_id", job.job_id),
                    ("variant", job.variant),
                    ("target", job.target),
                    ("index", job.index),
                    ("value", job.value),
                ]
            )
            if job.job_id in pool.failed:
                error = pool.failed[job.job_id]
                log.error("job %s failed: %s", job.job_id, error)
                record.update(
                    status="failed",
                    error=six.text_type(error),
                    outputs=[],
                    seconds=None,
                )
            else:
                record.update(status="ok", **pool.results[job.job_id])
            records[job.job_id] = record

        merged = _merge(run_fs, config, jobs, records)
        manifest = RunManifest(
            config.config_hash,
            __version__,
            config.canonical(),
            list(records.values()),
            merged,
            run_path,
        )
        write_json(run_fs, RunManifest.FILENAME, manifest.to_dict())
        missing = manifest.missing(run_fs)
        if missing:
            log.warning("run %s lists missing or empty files: %s", run_path, missing)
    return manifest


#: The outcome of comparing one golden file.
FileComparison = namedtuple(
    "FileComparison", ["path", "output", "status", "error", "tolerance", "message"]
)


class CompareReport(object):
    """The result of `compare_goldens`.

    Attributes:
        files (list): one `FileComparison` per golden file.

    """

    def __init__(self, files):
        # type: (List[FileComparison]) -> None
        self.files = files

    def __repr__(self):
        return make_repr("CompareReport", len(self.files), passed=(self.passed, True))

    def __iter__(self):
        # type: () -> Iterator[FileComparison]
        return iter(self.files)

    @property
    def failures(self):
        # type: () -> List[FileComparison]
        """`list`: the comparisons that did not pass."""
        return [item for item in self.files if item.status != "pass"]

    @property
    def missing(self):
        # type: () -> List[Text]
        """`list`: golden files absent from the run."""
        return [item.path for item in self.files if item.status == "missing"]

    @property
    def passed(self):
        # type: () -> bool
        """`bool`: `True` if every golden file matched."""
        return not self.failures

    def summary(self):
        # type: () -> List[Text]
        """Get one line per file."""
        lines = []
        for item in self.files:
            if item.error is None:
                lines.append(
                    "{} {}: {}".format(item.status.upper(), item.path, item.message)
                )
            else:
                lines.append(
                    "{} {}: error {:.3e} (tolerance {:.1e})".format(
                        item.status.upper(), item.path, item.error, item.tolerance
                    )
                )
        return lines


def _output_of(path):
    # type: (Text) -> Optional[Output]
    stem = basename(path)[: -len(".csv")]
    try:
        return Output(stem.split("-")[0])
    except ValueError:
        return None


def _relative_error(actual, expected):
    # type: (numpy.ndarray, numpy.ndarray) -> float
    """Get the worst per-column ``max|a - b| / max|b|``; NaNs must coincide."""
    if not expected.size:
        return 0.0
    nan_actual = numpy.isnan(actual)
    nan_expected = numpy.isnan(expected)
    if (nan_actual != nan_expected).any():
        return float("inf")
    difference = numpy.abs(numpy.where(nan_expected, 0.0, actual - expected))
    scale = numpy.nanmax(numpy.abs(numpy.where(nan_expected, 0.0, expected)), axis=0)
    return float(numpy.max(difference.max(axis=0) / numpy.maximum(scale, 1e-300)))


def _compare_file(run_fs, golden_fs, path, tolerance, output):
    # type: (FS, FS, Text, float, Output) -> FileComparison
    if not run_fs.isfile(path):
        return FileComparison(
            path, output, "missing", None, tolerance, "missing from run"
        )
    golden_header, expected = read_table(golden_fs, path)
    header, actual = read_table(run_fs, path)
    if header != golden_header or actual.shape != expected.shape:
        return FileComparison(
            path, output, "fail", None, tolerance, "columns or row count differ"
        )
    error = _relative_error(actual, expected)
    status = "pass" if error <= tolerance else "fail"
    return FileComparison(path, output, status, error, tolerance, "")


def compare_goldens(run_dir, golden_dir, tolerances=None):
    # type: (Union[FS, Text], Union[FS, Text], Optional[Dict[Output, float]]) -> CompareReport
    """Compare every CSV of a golden run with the same file of a run.

    Per-job files under ``jobs/`` are skipped. A file passes when the
    worst column-wise relative error is within the tolerance of its
    output kind.

    Arguments:
        run_dir (FS or str): the run directory.
        golden_dir (FS or str): the golden run directory.
        tolerances (dict, optional): `Output` to relative tolerance,
            merged over the defaults.

    Raises:
        ~uscqed.errors.ConfigError: if either directory cannot be
            opened.

    """
    from fs.errors import CreateFailed

    from .config import DEFAULT_TOLERANCES

    limits = dict(DEFAULT_TOLERANCES)
    limits.update(tolerances or {})
    try:
        run_fs = run_dir if isinstance(run_dir, FS) else open_fs(run_dir)
        golden_fs = golden_dir if isinstance(golden_dir, FS) else open_fs(golden_dir)
    except CreateFailed as error:
        raise errors.ConfigError.single("compare", six.text_type(error))

    files = []
    for path in sorted(golden_fs.walk.files(filter=["*.csv"], exclude_dirs=["jobs"])):
        output = _output_of(path)
        if output is None:
            files.append(
                FileComparison(path, None, "fail", None, None, "unknown table")
            )
            continue
        files.append(_compare_file(run_fs, golden_fs, path, limits[output], output))
    report = CompareReport(files)
    log.info("compared %d files, %d failures", len(files), len(report.failures))
    return report
