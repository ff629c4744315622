"""
Command handlers. Each returns a process exit code and prints one JSON
payload on stdout; artifacts go to the configured output directory.
"""
import json
import logging
import os
import sys
from typing import Callable, Dict, Optional

from ..engine.analysis import quotient_sweep
from ..engine.geometry import build_boundary
from ..engine.projection import project
from ..engine.sequences import check_condition_c1, make_sequence
from ..models.config import RunConfig
from ..models.enums import OutputFormat
from ..models.errors import (EXIT_CONDITION_FAILURE, EXIT_INTERNAL, EXIT_LEMMA_FAILURE, EXIT_OK, ConditionError,
                             SmoothProjectionError)
from ..models.geometry import BoundaryModel, Point2
from ..models.sequence import AlphaSequence
from ..utils.export import (PIECE_COLUMNS, QUOTIENT_COLUMNS, REPORT_COLUMNS, piece_rows, quotient_rows,
                            report_rows, save_boundary, with_config, write_json, write_table, write_text)
from ..utils.svg import boundary_figure, quotient_figure
from .registry import get_verifier

logger = logging.getLogger(__name__)


def emit(payload: Dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def execute(handler: Callable[..., int], *args) -> int:
    """Run a handler and map engine errors onto the exit-code contract"""
    try:
        return handler(*args)
    except ConditionError as e:
        emit({"status": "FAIL", "message": str(e), "first_failure": e.first_failure})
        return EXIT_CONDITION_FAILURE
    except SmoothProjectionError as e:
        logger.error("%s: %s", type(e).__name__, e)
        emit({"status": "ERROR", "message": str(e)})
        return e.exit_code
    except Exception as e:
        logger.exception("Unexpected failure")
        emit({"status": "ERROR", "message": f"Internal error: {e}"})
        return EXIT_INTERNAL


def _sequence(config: RunConfig) -> AlphaSequence:
    return make_sequence(config.case, lam=config.lam, q=config.q, horizon=config.horizon)


def _model(config: RunConfig) -> BoundaryModel:
    return build_boundary(_sequence(config), config.depth, variant=config.variant, smooth_apex=config.smooth_apex)


def _artifact(config: RunConfig, name: str) -> str:
    return os.path.join(config.output, name)


def cmd_validate(config: RunConfig) -> int:
    seq = _sequence(config)
    report = check_condition_c1(seq, config.horizon)
    payload = with_config(config, {
        "status": "OK" if report.passed else "FAIL",
        "sequence": seq.label,
        "c": seq.c,
        "n_min": seq.n_min,
        "horizon": report.n_max,
        "first_failure": report.first_failure,
        "failure_kind": report.failure_kind,
    })
    emit(payload)
    return EXIT_OK if report.passed else EXIT_CONDITION_FAILURE


def cmd_construct(config: RunConfig) -> int:
    model = _model(config)
    files = []
    if OutputFormat.JSON in config.formats:
        files.append(save_boundary(_artifact(config, "boundary.json"), model, config))
    if OutputFormat.SVG in config.formats:
        files.append(write_text(_artifact(config, "boundary.svg"), boundary_figure(model, config.n_range).render()))
    if OutputFormat.CSV in config.formats:
        files.append(write_table(_artifact(config, "pieces.csv"), piece_rows(model), PIECE_COLUMNS))
    emit({
        "status": "OK",
        "sequence": model.seq.label,
        "pieces": len(model.pieces),
        "arcs": len(model.arcs()),
        "files": files,
    })
    return EXIT_OK


def cmd_project(config: RunConfig, point: Point2) -> int:
    result = project(point, _model(config))
    if not result.truncation_safe:
        logger.warning("Projection of %s touches the truncated end of the boundary", point)
    emit(result.to_dict())
    return EXIT_OK


def cmd_verify(config: RunConfig, lemma: str) -> int:
    verifier = get_verifier(lemma)
    report = verifier(_model(config), config)
    files = []
    if OutputFormat.JSON in config.formats:
        files.append(write_json(_artifact(config, f"{lemma}.json"), with_config(config, report.to_dict())))
    if OutputFormat.CSV in config.formats:
        files.append(write_table(_artifact(config, f"{lemma}.csv"), report_rows(report), REPORT_COLUMNS))
    emit({
        "status": "PASS" if report.passed else "FAIL",
        "lemma": lemma,
        "case": report.case,
        "max_deviation": report.max_deviation,
        "tolerance": report.tolerance,
        "files": files,
    })
    return EXIT_OK if report.passed else EXIT_LEMMA_FAILURE


def cmd_quotients(config: RunConfig, exponents: Optional[tuple] = None) -> int:
    model = _model(config)
    samples = quotient_sweep(model, exponents=exponents, n_range=config.n_range)
    files = []
    if OutputFormat.CSV in config.formats:
        files.append(write_table(_artifact(config, "quotients.csv"), quotient_rows(samples), QUOTIENT_COLUMNS))
    if OutputFormat.SVG in config.formats:
        files.append(write_text(_artifact(config, "quotients.svg"), quotient_figure(samples).render()))
    if OutputFormat.JSON in config.formats:
        files.append(write_json(_artifact(config, "quotients.json"), with_config(config, {
            "samples": quotient_rows(samples),
        })))
    emit({"status": "OK", "rows": len(samples), "files": files})
    return EXIT_OK
