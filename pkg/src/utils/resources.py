"""
Resource path helper.

Built-in suite files live in the src/resources folder next to the code.
"""

from pathlib import Path


def get_base_path() -> Path:
    """Get the path to the src directory."""
    return Path(__file__).parent.parent


def get_resource_path(relative_path: str) -> Path:
    """Get absolute path to a resource file.

    Args:
        relative_path: Path relative to the resources folder
                      (e.g., "suites/default.ini")

    Returns:
        Absolute path to the resource file
    """
    return get_base_path() / "resources" / relative_path


def get_suites_path() -> Path:
    """Get path to the built-in suite presets folder."""
    return get_resource_path("suites")
