"""
Shared plumbing for the command-line subcommands.

Covers merging defaults, settings, config files and flags into a
``RunConfig``, and deterministic CSV/JSON artifact writers.
"""

import csv
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Type, TypeVar

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError
from tabulate import tabulate

from config.settings import Settings
from core.exceptions import ValidationError
from models.schemas import RunConfig

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

RUN_KEYS = tuple(name for name in RunConfig.model_fields if name != "out_dir")
CONFIG_FILE_KEYS = frozenset(RUN_KEYS) | {"out", "jobs", "parameter", "values", "snapshots"}


def parse_model(model: Type[ModelT], data: Mapping[str, Any], field: str) -> ModelT:
    """Build a pydantic model, re-raising its errors as ``ValidationError``."""
    try:
        return model(**data)
    except PydanticValidationError as e:
        messages = []
        for error in e.errors():
            loc = " -> ".join(str(part) for part in error["loc"]) or field
            messages.append(f"{loc}: {error['msg']}")
        raise ValidationError("; ".join(messages), field=field) from e


def parse_float_list(raw: Optional[str], field: str) -> Optional[List[float]]:
    """Parse ``"0.5,1,2"`` into floats; None stays None."""
    if raw is None:
        return None
    try:
        return [float(part) for part in str(raw).split(",") if part.strip()]
    except ValueError as e:
        raise ValidationError(f"Expected comma-separated numbers, got '{raw}'", field=field, value=raw) from e


def build_run_config(settings: Settings, file_values: Mapping[str, str],
                     flags: Mapping[str, Any]) -> RunConfig:
    """
    Merge run inputs. Later sources win:
    built-in defaults < settings/env < config file < explicit flags.
    """
    data: Dict[str, Any] = {
        "dt": settings.integrator.dt,
        "t_max": settings.integrator.t_max,
        "eps_stop": settings.integrator.eps_stop,
        "out_dir": settings.out,
    }

    for key in RUN_KEYS:
        if key in file_values:
            data[key] = file_values[key]
    if "out" in file_values:
        data["out_dir"] = file_values["out"]

    for key in RUN_KEYS:
        if flags.get(key) is not None:
            data[key] = flags[key]
    if flags.get("out") is not None:
        data["out_dir"] = flags["out"]

    return parse_model(RunConfig, data, field="config")


def format_cell(value: Any) -> str:
    """Shortest round-trip text for floats, plain text otherwise."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "nan" if math.isnan(value) else repr(value)
    if hasattr(value, "item"):
        return format_cell(value.item())
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV with LF line endings and full-precision floats."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
    logger.debug(f"Wrote {path}", extra={"operation": "write_csv"})
    return path


def _json_ready(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: Path, data: Mapping[str, Any]) -> Path:
    """Write a JSON summary; non-finite floats become null."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_json_ready(dict(data)), indent=2, allow_nan=False)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text + "\n")
    logger.debug(f"Wrote {path}", extra={"operation": "write_json"})
    return path


def print_summary(rows: Sequence[Sequence[Any]], headers: Sequence[str] = ("quantity", "value"),
                  stream=None) -> None:
    """Print a short result table to stdout."""
    stream = stream or sys.stdout
    print(tabulate(rows, headers=list(headers), tablefmt="simple", floatfmt=".6g"), file=stream)
