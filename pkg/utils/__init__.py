from .helpers import (
    read_text,
    write_text,
    to_json,
    save_json,
    load_json,
    file_digest,
    format_percent,
    format_report_summary
)

__all__ = [
    'read_text',
    'write_text',
    'to_json',
    'save_json',
    'load_json',
    'file_digest',
    'format_percent',
    'format_report_summary'
]
