"""
Debug Logging
Run log for pohocheck: operator calls, identity verdicts, flow progress and
exports. Silent unless the command line passes --debug.
"""

import logging
import sys
import threading
from collections import Counter
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional, Tuple

CONSOLE_FORMAT = '[%(asctime)s] %(levelname)s - %(name)s: %(message)s'
FILE_FORMAT = '[%(asctime)s] %(levelname)s %(threadName)s %(module)s.%(funcName)s\n    %(message)s\n'

DEFAULT_LOG_DIR = Path(__file__).parent.parent.parent / 'logs'


class DebugLogger:
    """Process-wide logger behind the --debug switch."""

    _instance: Optional['DebugLogger'] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return
        self._initialized = True

        self._enabled = False
        self._log_file: Optional[Path] = None
        self._logger = logging.getLogger('pohocheck')
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False

        # stderr, so that printed results on stdout stay parseable
        self._console = logging.StreamHandler(sys.stderr)
        self._console.setFormatter(logging.Formatter(CONSOLE_FORMAT, datefmt='%H:%M:%S'))
        self._file: Optional[logging.FileHandler] = None

        # verdicts per identity name, filled from suite worker threads
        self._verdicts: Counter = Counter()
        self._lock = threading.Lock()

    @property
    def enabled(self) -> bool:
        return self._enabled

    @property
    def log_file_path(self) -> Optional[Path]:
        return self._log_file

    def enable(self, log_dir: Optional[str] = None, tag: str = "debug",
               console_level: int = logging.INFO):
        """
        Start logging to stderr and to logs/pohocheck_<tag>_<timestamp>.log.

        The file receives every record; the console only console_level and up.
        """
        if self._enabled:
            return
        self._enabled = True
        with self._lock:
            self._verdicts.clear()

        self._console.setLevel(console_level)
        self._logger.addHandler(self._console)

        directory = Path(log_dir) if log_dir else DEFAULT_LOG_DIR
        directory.mkdir(parents=True, exist_ok=True)
        stamp = datetime.now().strftime('%Y%m%d_%H%M%S')
        self._log_file = directory / f'pohocheck_{tag}_{stamp}.log'

        self._file = logging.FileHandler(self._log_file, encoding='utf-8')
        self._file.setLevel(logging.DEBUG)
        self._file.setFormatter(logging.Formatter(FILE_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
        self._logger.addHandler(self._file)

        self._logger.info(f"Logging to {self._log_file}")

    def disable(self):
        """Write the verdict tally and detach all handlers."""
        if not self._enabled:
            return

        tally = self.verdicts()
        if tally:
            lines = [f"{name}: {passed} pass, {failed} fail"
                     for name, (passed, failed) in sorted(tally.items())]
            self._logger.info("Identity verdicts\n    " + "\n    ".join(lines))
        self._enabled = False

        self._logger.removeHandler(self._console)
        if self._file:
            self._file.close()
            self._logger.removeHandler(self._file)
            self._file = None

    def verdicts(self) -> Dict[str, Tuple[int, int]]:
        """identity name -> (passed, failed) since enable()."""
        with self._lock:
            names = {name for name, _ in self._verdicts}
            return {name: (self._verdicts[name, True], self._verdicts[name, False])
                    for name in names}

    def _emit(self, level: int, msg: str, *args, **kwargs):
        if self._enabled:
            self._logger.log(level, msg, *args, **kwargs)

    def debug(self, msg: str, *args, **kwargs):
        self._emit(logging.DEBUG, msg, *args, **kwargs)

    def info(self, msg: str, *args, **kwargs):
        self._emit(logging.INFO, msg, *args, **kwargs)

    def warning(self, msg: str, *args, **kwargs):
        self._emit(logging.WARNING, msg, *args, **kwargs)

    def exception(self, msg: str, *args, **kwargs):
        self._emit(logging.ERROR, msg, *args, exc_info=True, **kwargs)

    # -- structured records ------------------------------------------------

    def log_operator(self, operation: str, details: dict):
        """One call of a spectral, kernel or quadrature routine."""
        if self._enabled:
            fields = ' '.join(f"{k}={v}" for k, v in details.items())
            self._logger.debug(f"op {operation} {fields}")

    def log_identity(self, report):
        if not self._enabled:
            return
        with self._lock:
            self._verdicts[report.identity_name, bool(report.passed)] += 1
        verdict = "pass" if report.passed else "FAIL"
        self._logger.log(
            logging.DEBUG if report.passed else logging.INFO,
            f"identity {report.identity_name} [{report.param_string()}] {verdict} "
            f"lhs={report.lhs:.6e} rhs={report.rhs:.6e} rel_gap={report.rel_gap:.3e}")

    def log_flow(self, step: int, energy: float, residual: float, tau: float):
        self._emit(logging.DEBUG, f"flow step={step} E={energy:.15f} "
                                  f"res={residual:.3e} tau={tau:.3e}")

    def log_export(self, format: str, path: str, success: bool, details: str = ""):
        suffix = f" ({details})" if details else ""
        if success:
            self._emit(logging.INFO, f"wrote {format} {path}{suffix}")
        else:
            self._emit(logging.ERROR, f"could not write {format} {path}{suffix}")


debug_log = DebugLogger()
