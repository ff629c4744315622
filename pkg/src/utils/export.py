"""
Deterministic writers for reports, tables and boundary models
"""
import json
import logging
import os
from typing import Dict, Iterable, List, Optional, Sequence

import pandas as pd
from typing_extensions import NotRequired, TypedDict

from ..models.config import RunConfig
from ..models.enums import BoundaryVariant, PieceKind, SequenceCase
from ..models.errors import ExportError
from ..models.geometry import ArcPiece, BoundaryModel, Point2, SegmentPiece
from ..models.results import QuotientSample
from ..models.sequence import AlphaSequence

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
BOUNDARY_FORMAT_VERSION = 1


class PieceRecord(TypedDict):
    type: str
    index: int
    start: List[float]
    end: List[float]
    center: NotRequired[List[float]]
    radius: NotRequired[float]
    start_angle: NotRequired[float]
    end_angle: NotRequired[float]
    span: NotRequired[float]


class BoundaryRecord(TypedDict):
    version: int
    frame: str
    sequence: Dict
    depth: int
    variant: str
    smooth_apex: bool
    mirror_real_axis: bool
    mirror_imaginary_axis: bool
    pieces: List[PieceRecord]


def _ensure_dir(path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        try:
            os.makedirs(directory, exist_ok=True)
        except OSError as e:
            raise ExportError(f"Cannot create directory {directory}: {e}")


def dumps(payload: Dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_text(path: str, text: str) -> str:
    _ensure_dir(path)
    try:
        with open(path, "w", newline="\n") as handle:
            handle.write(text)
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}")
    logger.info("Wrote %s", path)
    return path


def write_json(path: str, payload: Dict) -> str:
    return write_text(path, dumps(payload))


def write_table(path: str, rows: Iterable[Dict], columns: Sequence[str]) -> str:
    """Write rows as CSV with 17 significant digits"""
    frame = pd.DataFrame(list(rows), columns=list(columns))
    _ensure_dir(path)
    try:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}")
    logger.info("Wrote %s (%d rows)", path, len(frame))
    return path


def with_config(config: RunConfig, payload: Dict) -> Dict:
    """Embed the resolved configuration so every artifact describes its own run"""
    return {"config": config.to_dict(), **payload}


# Tables

def quotient_rows(samples: Iterable[QuotientSample]) -> List[Dict]:
    return [
        {
            "theta": sample.theta,
            "Dx": sample.quotient.x,
            "Dy": sample.quotient.y,
            "label": sample.label,
            "n": sample.n,
        }
        for sample in samples
    ]


QUOTIENT_COLUMNS = ("theta", "Dx", "Dy", "label", "n")


def report_rows(report) -> List[Dict]:
    return [
        {"n": n, "observed": observed, "deviation": deviation}
        for n, observed, deviation in zip(report.indices, report.observed, report.deviations)
    ]


REPORT_COLUMNS = ("n", "observed", "deviation")


def piece_rows(model: BoundaryModel) -> List[Dict]:
    rows = []
    for position, piece in enumerate(model.pieces):
        rows.append({
            "position": position,
            "type": piece.kind.value,
            "index": piece.index,
            "start_x": 1.0 + piece.start.x,
            "start_y": piece.start.y,
            "end_x": 1.0 + piece.end.x,
            "end_y": piece.end.y,
            "radius": piece.radius if piece.kind == PieceKind.ARC else None,
            "length": piece.length,
        })
    return rows


PIECE_COLUMNS = ("position", "type", "index", "start_x", "start_y", "end_x", "end_y", "radius", "length")


# Boundary models

def _sequence_record(seq: AlphaSequence) -> Dict:
    return {"case": seq.case.value, "c": seq.c, "q": seq.q, "lambda": seq.lam, "n_min": seq.n_min}


def boundary_to_dict(model: BoundaryModel) -> BoundaryRecord:
    pieces: List[PieceRecord] = []
    for piece in model.pieces:
        record: PieceRecord = {
            "type": piece.kind.value,
            "index": piece.index,
            "start": piece.start.to_list(),
            "end": piece.end.to_list(),
        }
        if piece.kind == PieceKind.ARC:
            record["center"] = piece.center.to_list()
            record["radius"] = piece.radius
            record["start_angle"] = piece.start_angle
            record["end_angle"] = piece.end_angle
            record["span"] = piece.span
        pieces.append(record)
    return {
        "version": BOUNDARY_FORMAT_VERSION,
        "frame": "offset from (1,0)",
        "sequence": _sequence_record(model.seq),
        "depth": model.depth,
        "variant": model.variant.value,
        "smooth_apex": model.smooth_apex,
        "mirror_real_axis": model.mirror_real_axis,
        "mirror_imaginary_axis": model.mirror_imaginary_axis,
        "pieces": pieces,
    }


def boundary_from_dict(record: Dict) -> BoundaryModel:
    try:
        seq_record = record["sequence"]
        seq = AlphaSequence(
            case=SequenceCase(seq_record["case"]),
            c=seq_record["c"],
            q=seq_record["q"],
            lam=seq_record["lambda"],
            n_min=seq_record["n_min"],
        )
        pieces = []
        for item in record["pieces"]:
            start, end = Point2(*item["start"]), Point2(*item["end"])
            kind = PieceKind(item["type"])
            if kind == PieceKind.ARC:
                pieces.append(ArcPiece(
                    center=Point2(*item["center"]),
                    radius=item["radius"],
                    end_angle=item["end_angle"],
                    span=item["span"],
                    start=start,
                    end=end,
                    index=item["index"],
                ))
            else:
                pieces.append(SegmentPiece(start=start, end=end, index=item["index"], kind=kind))
        return BoundaryModel(
            seq=seq,
            depth=record["depth"],
            pieces=tuple(pieces),
            variant=BoundaryVariant(record["variant"]),
            smooth_apex=record["smooth_apex"],
            mirror_real_axis=record["mirror_real_axis"],
            mirror_imaginary_axis=record["mirror_imaginary_axis"],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ExportError(f"Malformed boundary record: {e}")


def save_boundary(path: str, model: BoundaryModel, config: Optional[RunConfig] = None) -> str:
    payload = dict(boundary_to_dict(model))
    if config is not None:
        payload = with_config(config, payload)
    return write_json(path, payload)


def load_boundary(path: str) -> BoundaryModel:
    try:
        with open(path) as handle:
            record = json.load(handle)
    except OSError as e:
        raise ExportError(f"Cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise ExportError(f"{path} is not valid JSON: {e}")
    return boundary_from_dict(record)
