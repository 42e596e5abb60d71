"""Built-in verification suites."""

from .preset_manager import PresetManager, get_preset_manager

__all__ = ['PresetManager', 'get_preset_manager']
