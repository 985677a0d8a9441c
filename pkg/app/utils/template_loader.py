"""
Template Loader Utility

Report templates live as plain text in templates/ and are filled with
``str.format``.
"""

from pathlib import Path
from typing import Any

TEMPLATES_DIR = Path(__file__).parent.parent.parent / "templates"


def load_template(name: str, encoding: str = "utf-8") -> str:
    """
    Load a template from the templates/ directory.

    Args:
        name: Template filename without extension (e.g., "verify_report" for "verify_report.txt")
        encoding: File encoding, defaults to "utf-8"

    Returns:
        str: The template content

    Raises:
        FileNotFoundError: If the template file doesn't exist

    Examples:
        >>> header = load_template("verify_report")
    """
    template_file = get_template_path(name)

    if not template_file.exists():
        raise FileNotFoundError(
            f"Template file not found: {template_file}\n"
            f"Available templates: {list_available_templates()}"
        )

    return template_file.read_text(encoding=encoding).rstrip("\n")


def render_template(name: str, **values: Any) -> str:
    """Load a template and substitute ``{placeholders}``."""
    return load_template(name).format(**values)


def list_available_templates() -> list[str]:
    """
    List all available template files in the templates/ directory.

    Returns:
        list[str]: Template names (without .txt extension)
    """
    if not TEMPLATES_DIR.exists():
        return []

    return sorted(
        p.stem for p in TEMPLATES_DIR.glob("*.txt")
        if p.is_file() and not p.name.startswith("_")
    )


def get_template_path(name: str) -> Path:
    """Full path to a template file."""
    return TEMPLATES_DIR / f"{name}.txt"
