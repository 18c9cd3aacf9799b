import os
from typing import Any, Dict, Optional, Type, TypeVar

import yaml
from pydantic import BaseModel

from src.domain.errors import ArtifactFormatError, ArtifactIOError
from src.services.storage import read_json

ModelT = TypeVar("ModelT", bound=BaseModel)


def load_yaml_config(file_path: str) -> Dict[str, Any]:
    """
    Safely loads a YAML or JSON configuration file. JSON files go through the
    JSON parser so exponent floats such as 1e-05 stay floats.
    """
    if not os.path.exists(file_path):
        raise ArtifactIOError(f"Configuration file not found: {file_path}")

    if file_path.lower().endswith(".json"):
        data = read_json(file_path)
        if not isinstance(data, dict):
            raise ArtifactFormatError("Configuration file must hold a mapping", path=file_path)
        return data

    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ArtifactIOError(f"Cannot read configuration file {file_path}: {e}") from e

    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark else None
        column = mark.column + 1 if mark else None
        context = text.splitlines()[mark.line] if mark and mark.line < len(text.splitlines()) else ""
        raise ArtifactFormatError(
            f"Error parsing configuration file: {getattr(e, 'problem', e)}",
            path=file_path, line=line, column=column, context=context,
        ) from e

    if not isinstance(data, dict):
        raise ArtifactFormatError("Configuration file must hold a mapping", path=file_path)
    return data


def load_experiment_config(file_path: str, command: Optional[str] = None) -> Dict[str, Any]:
    """
    Loads the parameter block for one command.

    Accepts a plain recipe ({"n_qubits": 8, ...}), a multi-command recipe
    keyed by command name, or a metadata file written by a previous run
    (its "config" block is used, so the run can be repeated exactly).
    """
    data = load_yaml_config(file_path)
    if "config" in data and "command" in data:
        if command and data["command"] != command:
            raise ArtifactFormatError(
                f"Metadata belongs to command '{data['command']}', not '{command}'", path=file_path,
            )
        return dict(data["config"] or {})
    if command and isinstance(data.get(command), dict):
        return dict(data[command])
    return data


def merge_config(model: Type[ModelT], file_values: Optional[Dict[str, Any]] = None,
                 flag_values: Optional[Dict[str, Any]] = None) -> ModelT:
    """
    Precedence: flags > config file > model defaults. Flags left at None
    do not override anything.
    """
    merged: Dict[str, Any] = dict(file_values or {})
    merged.update({key: value for key, value in (flag_values or {}).items() if value is not None})
    return model.model_validate(merged)
