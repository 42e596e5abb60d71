"""Export of reports and traces to JSON and CSV."""

from .exporter import Exporter, ExportFormat, ExportOptions

__all__ = ['Exporter', 'ExportFormat', 'ExportOptions']
