"""
Preset Manager
Lists and loads the built-in verification suites.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from core.suite import ConfigError, SuiteConfig, parse_suite
from utils.debug_log import debug_log
from utils.resources import get_suites_path


@dataclass
class Preset:
    """A suite file shipped with the package."""
    name: str
    filepath: Path
    description: str = ""

    def __str__(self):
        return self.name


class PresetManager:
    """
    Manages built-in suite presets (resources/suites/*.ini).
    """

    def __init__(self, suites_path: Optional[Path] = None):
        self._builtin_path = suites_path or get_suites_path()
        self._presets: Dict[str, Preset] = {}
        self._loaded = False
        debug_log.debug(f"PresetManager initialized: {self._builtin_path.resolve()}")

    def load_presets(self, force_reload: bool = False) -> None:
        """Scan the suites directory."""
        if self._loaded and not force_reload:
            return

        self._presets.clear()
        if not self._builtin_path.exists():
            debug_log.warning(f"Suite directory does not exist: {self._builtin_path}")
            self._loaded = True
            return

        for filepath in sorted(self._builtin_path.glob('*.ini')):
            self._presets[filepath.stem] = Preset(
                name=filepath.stem,
                filepath=filepath,
                description=self._first_comment(filepath),
            )
        debug_log.debug(f"Found {len(self._presets)} suite presets")
        self._loaded = True

    @staticmethod
    def _first_comment(filepath: Path) -> str:
        try:
            for line in filepath.read_text(encoding='utf-8').splitlines():
                line = line.strip()
                if line.startswith(('#', ';')):
                    return line.lstrip('#; ').strip()
                if line:
                    break
        except OSError as e:
            debug_log.warning(f"Error reading preset {filepath}: {e}")
        return ""

    def get_preset_names(self) -> List[str]:
        """Get list of all preset names."""
        self.load_presets()
        return list(self._presets.keys())

    def get_all_presets(self) -> List[Preset]:
        self.load_presets()
        return list(self._presets.values())

    def get_preset(self, name: str) -> Optional[Preset]:
        """Get a preset by name."""
        self.load_presets()
        return self._presets.get(name)

    def load_suite(self, name: str) -> SuiteConfig:
        """
        Parse the named preset.

        Raises:
            ConfigError: if no preset has that name or the file is invalid.
        """
        preset = self.get_preset(name)
        if preset is None:
            raise ConfigError(f"unknown suite preset {name!r}; "
                              f"available: {', '.join(self.get_preset_names())}")
        text = preset.filepath.read_text(encoding='utf-8')
        return parse_suite(text, source=str(preset.filepath))


# Singleton instance
_preset_manager: Optional[PresetManager] = None


def get_preset_manager() -> PresetManager:
    """Get the global preset manager instance."""
    global _preset_manager
    if _preset_manager is None:
        _preset_manager = PresetManager()
    return _preset_manager
