"""
Exporter
Writes identity reports, spectra, Fourier data and flow traces to JSON and
CSV files.
"""

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

import numpy as np

from core.report import IdentityReport
from core.spectral import Spectrum
from utils.debug_log import debug_log


class ExportFormat(Enum):
    """Supported export formats."""
    JSON = "json"     # identity reports
    CSV = "csv"       # spectra, Fourier data, flow traces


@dataclass
class ExportOptions:
    """Options for export."""
    digits: int = 17              # significant digits of every float
    indent: int = 2               # JSON indentation
    sort_reports: bool = True     # sort by (identity_name, params)


def format_float(value: float, digits: int = 17) -> str:
    """Deterministic float text; non-finite values become JSON strings."""
    value = float(value)
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return f"{value:.{digits}g}"


class Exporter:
    """
    Writes verification artifacts to disk.
    """

    def __init__(self, options: Optional[ExportOptions] = None):
        self.options = options or ExportOptions()

    def reports_to_json(self, reports: Sequence[IdentityReport]) -> str:
        """Top-level JSON array of report objects."""
        items = list(reports)
        if self.options.sort_reports:
            items.sort(key=IdentityReport.sort_key)
        return self._encode([r.to_dict() for r in items], 0) + "\n"

    def write_reports(self, reports: Sequence[IdentityReport],
                      filepath: Union[str, Path]) -> bool:
        """
        Write reports as one JSON document.

        Returns:
            True if export succeeded, False otherwise.
        """
        filepath = Path(filepath)
        try:
            filepath.parent.mkdir(parents=True, exist_ok=True)
            filepath.write_text(self.reports_to_json(reports), encoding='utf-8')
            debug_log.log_export("JSON", str(filepath), True, f"{len(reports)} reports")
            return True
        except OSError as e:
            debug_log.log_export("JSON", str(filepath), False, str(e))
            return False

    def write_spectrum_csv(self, S: Spectrum, filepath: Union[str, Path]) -> bool:
        """Rows n, re_1, im_1, ..., re_m, im_m."""
        header = ['n']
        for j in range(1, S.m + 1):
            header += [f're_{j}', f'im_{j}']
        rows = []
        for n, c in zip(S.modes, S.coeffs):
            row = [int(n)]
            for value in c:
                row += [value.real, value.imag]
            rows.append(row)
        return self._write_csv(filepath, header, rows, "spectrum")

    def write_fourier_csv(self, a: np.ndarray, b: np.ndarray,
                          filepath: Union[str, Path]) -> bool:
        """Rows k, a_k components, b_k components."""
        m = a.shape[1]
        header = ['k'] + [f'a_{j}' for j in range(1, m + 1)] + [f'b_{j}' for j in range(1, m + 1)]
        rows = [[k] + list(a[k]) + list(b[k]) for k in range(a.shape[0])]
        return self._write_csv(filepath, header, rows, "fourier")

    def write_relations_csv(self, relations: Iterable[Any],
                            filepath: Union[str, Path]) -> bool:
        """Rows n, S_n, T_n, scale_n from FourierRelation records."""
        rows = [[rel.n, rel.S, rel.T, rel.scale] for rel in relations]
        return self._write_csv(filepath, ['n', 'S_n', 'T_n', 'scale_n'], rows, "relations")

    def write_flow_trace(self, energies: Sequence[float], residuals: Sequence[float],
                         filepath: Union[str, Path]) -> bool:
        """Rows step, energy, el_residual."""
        rows = [[k, e, r] for k, (e, r) in enumerate(zip(energies, residuals))]
        return self._write_csv(filepath, ['step', 'energy', 'el_residual'], rows, "flow trace")

    def _write_csv(self, filepath: Union[str, Path], header: List[str],
                   rows: List[list], what: str) -> bool:
        filepath = Path(filepath)
        try:
            filepath.parent.mkdir(parents=True, exist_ok=True)
            with open(filepath, 'w', newline='', encoding='utf-8') as f:
                writer = csv.writer(f, lineterminator='\n')
                writer.writerow(header)
                for row in rows:
                    writer.writerow([self._cell(v) for v in row])
            debug_log.log_export("CSV", str(filepath), True, f"{what}, {len(rows)} rows")
            return True
        except OSError as e:
            debug_log.log_export("CSV", str(filepath), False, str(e))
            return False

    def _cell(self, value: Any) -> str:
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return str(int(value))
        return format_float(value, self.options.digits).strip('"')

    def _encode(self, value: Any, level: int) -> str:
        pad = ' ' * (self.options.indent * (level + 1))
        end = ' ' * (self.options.indent * level)
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {self._encode(v, level + 1)}"
                     for k, v in value.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            items = [f"{pad}{self._encode(v, level + 1)}" for v in value]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        if isinstance(value, bool) or value is None:
            return json.dumps(value)
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return format_float(value, self.options.digits)
        return json.dumps(str(value))

    @staticmethod
    def get_supported_formats() -> list:
        """Get list of supported export formats."""
        return [fmt.value for fmt in ExportFormat]

