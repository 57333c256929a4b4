"""
CSV формат наборов данных и деревьев ветвления.

Набор данных:
    # lambda_B=1
    # epsilon=0.5
    # seed=42
    # sampler=direct
    particle_id,branch_index,decay_time
    0,1,0.70372811486125148
    ...

Числа пишутся с 17 значащими цифрами (точный возврат double), экспонента в нижнем регистре.
"""
# Импорт необходимых библиотек
import csv          # Чтение и запись строк набора данных
import io
import math
from contextlib import contextmanager
from pathlib import Path  # Пути к файлам CSV
from typing import Optional

import numpy as np

from model.params import RateParams
from utils.errors import DatasetFormatError

from .records import BranchTree, DecayDataset, SamplerTag

DATASET_HEADER = ["particle_id", "branch_index", "decay_time"]
TREE_HEADER = ["event_ordinal", "event_time"]
METADATA_KEYS = ("lambda_B", "epsilon", "seed", "sampler")
# Индекс ветви хранится в int64
MAX_BRANCH_INDEX = int(np.iinfo(np.int64).max)


def format_number(value) -> str:
    """17 значащих цифр, целые без точки: 1 -> '1', 0.1 -> '0.10000000000000001'."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


@contextmanager
def _open_text(target, mode: str):
    # Путь открываем сами, готовый поток (stdout, StringIO) не закрываем
    if isinstance(target, (str, Path)):
        with open(target, mode, encoding="utf-8", newline="") as handle:
            yield handle
    else:
        yield target


def write_dataset_csv(dataset: DecayDataset, target) -> None:
    """
    Запись набора данных в CSV.

    Args:
        dataset (DecayDataset): Набор данных
        target: Путь к файлу или текстовый поток
    """
    with _open_text(target, "w") as handle:
        if dataset.params is not None:
            handle.write(f"# lambda_B={format_number(dataset.params.lambda_B)}\n")
            handle.write(f"# epsilon={format_number(dataset.params.epsilon)}\n")
        if dataset.seed is not None:
            handle.write(f"# seed={dataset.seed}\n")
        if dataset.sampler_tag is not None:
            handle.write(f"# sampler={dataset.sampler_tag.value}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(DATASET_HEADER)
        writer.writerows(
            (pid, i, format(t, ".17g"))
            for pid, (i, t) in enumerate(zip(dataset.branch_index.tolist(), dataset.decay_time.tolist()))
        )


def _parse_metadata(metadata: dict, lines: dict):
    params = None
    if "lambda_B" in metadata or "epsilon" in metadata:
        try:
            params = RateParams(float(metadata["lambda_B"]), float(metadata.get("epsilon", "0")))
        except (KeyError, ValueError) as e:
            line = lines.get("lambda_B", lines.get("epsilon", 1))
            raise DatasetFormatError(f"invalid model metadata: {e}", line) from e
    seed = None
    if "seed" in metadata:
        try:
            seed = int(metadata["seed"])
        except ValueError as e:
            raise DatasetFormatError(f"invalid seed {metadata['seed']!r}", lines["seed"]) from e
    sampler = None
    if "sampler" in metadata:
        try:
            sampler = SamplerTag(metadata["sampler"])
        except ValueError as e:
            raise DatasetFormatError(f"unknown sampler {metadata['sampler']!r}", lines["sampler"]) from e
    return params, seed, sampler


def read_dataset_csv(source) -> DecayDataset:
    """
    Чтение набора данных из CSV.

    Комментарии '# key=value' перед заголовком задают параметры генерации;
    без них набор считается внешними данными (params = None).

    Raises:
        DatasetFormatError: С номером строки при любой ошибке формата
    """
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise DatasetFormatError(f"cannot read {source}: {e}", 0) from e
    else:
        text = source.read()

    metadata, metadata_lines = {}, {}
    header_seen = False
    branch_index, decay_time = [], []

    for line_number, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip():
            continue
        if row[0].startswith("#"):
            if header_seen:
                raise DatasetFormatError("comment after header", line_number)
            key, sep, value = ",".join(row).lstrip("#").strip().partition("=")
            if sep and key.strip() in METADATA_KEYS:
                metadata[key.strip()] = value.strip()
                metadata_lines[key.strip()] = line_number
            continue
        if not header_seen:
            if [cell.strip() for cell in row] != DATASET_HEADER:
                raise DatasetFormatError(f"expected header {','.join(DATASET_HEADER)}", line_number)
            header_seen = True
            continue
        if len(row) != 3:
            raise DatasetFormatError(f"expected 3 fields, got {len(row)}", line_number)
        try:
            pid, i, t = int(row[0]), int(row[1]), float(row[2])
        except ValueError as e:
            raise DatasetFormatError(f"invalid number: {e}", line_number) from e
        if pid != len(decay_time):
            raise DatasetFormatError(f"particle ids must be dense 0..N-1, got {pid}", line_number)
        if not 1 <= i <= MAX_BRANCH_INDEX:
            raise DatasetFormatError(f"branch_index must lie in [1, {MAX_BRANCH_INDEX}], got {i}", line_number)
        if not (math.isfinite(t) and t > 0.0):
            raise DatasetFormatError(f"decay_time must be finite and positive, got {row[2].strip()}", line_number)
        branch_index.append(i)
        decay_time.append(t)

    if not header_seen:
        raise DatasetFormatError("missing header", 1)
    if not decay_time:
        raise DatasetFormatError("dataset has no records", len(text.splitlines()) or 1)

    params, seed, sampler = _parse_metadata(metadata, metadata_lines)
    return DecayDataset(branch_index, decay_time, params, seed, sampler)


def write_tree_csv(tree: BranchTree, target, seed: Optional[int] = None) -> None:
    """Экспорт дерева: одна строка на событие ветвления ветви B_0."""
    with _open_text(target, "w") as handle:
        handle.write(f"# lambda_B={format_number(tree.params.lambda_B)}\n")
        handle.write(f"# epsilon={format_number(tree.params.epsilon)}\n")
        handle.write(f"# horizon={format_number(tree.horizon)}\n")
        if seed is not None:
            handle.write(f"# seed={seed}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(TREE_HEADER)
        writer.writerows(
            (ordinal, format(t, ".17g")) for ordinal, t in enumerate(tree.spine_event_times, start=1)
        )
