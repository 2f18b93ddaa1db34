"""Enable ``python -m irrat``."""

from irrat.cli import app

app()
