import typer
from rich.table import Table
from rich.console import Console
from pathlib import Path
from typing import Optional
import logging

from idpath.cli.config import validate_config, load_config_file
from idpath.cli.runner import RunResult, resolve_out_dir, run, write_error
from idpath.errors import ConfigError
from idpath.settings import settings

app = typer.Typer(help="Shot noise path generation for infinitely divisible processes.")
console = Console()
logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

ConfigOption = typer.Option(..., "--config", "-c", help="Experiment config (YAML or JSON)")
SeedOption = typer.Option(None, "--seed", help="Override the config seed")
OutOption = typer.Option(None, "--out", "-o", help="Output directory")
TolOption = typer.Option(None, "--quadrature-tol", help="Relative tolerance of kernel quadrature")


def _print_summary(result: RunResult) -> None:
    table = Table("Artifact", "File", "Rows")
    for name, path in result.artifacts.items():
        table.add_row(name, str(path), str(result.rows.get(name, "")))
    console.print(table)
    if result.report is not None:
        verdicts = Table("Assumption", "Status", "Method")
        for key in ("2a", "2b", "2c", "3a", "3b"):
            v = getattr(result.report, f"assumption_{key}")
            colour = {"pass": "green", "fail": "red"}.get(v.status, "yellow")
            verdicts.add_row(key, f"[{colour}]{v.status}[/{colour}]", v.method)
        if result.report.cf_status is not None:
            colour = {"pass": "green", "fail": "red"}.get(result.report.cf_status, "yellow")
            cf = result.report.cf_status
            verdicts.add_row("cf", f"[{colour}]{cf}[/{colour}]", f"distance {result.report.cf_distance:.3g}")
        console.print(verdicts)


def _execute(
    mode: str,
    config_path: Path,
    seed: Optional[int],
    out: Optional[Path],
    quadrature_tol: Optional[float],
) -> None:
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT)
    previous_tol = settings.quadrature_tol
    try:
        raw = load_config_file(config_path)
        raw["mode"] = mode
        if seed is not None:
            raw["seed"] = seed
        config = validate_config(raw)
    except ConfigError as e:
        write_error(resolve_out_dir(None, out), e)
        console.print(f"[bold red]{e.code}:[/bold red] invalid config {config_path}")
        for v in e.violations:
            console.print(f"  - {v}")
        raise typer.Exit(code=e.exit_code)

    if quadrature_tol is not None:
        if quadrature_tol <= 0:
            console.print("[bold red]Error:[/bold red] --quadrature-tol must be > 0")
            raise typer.Exit(code=2)
        settings.quadrature_tol = quadrature_tol
    try:
        result = run(config, out)
    except Exception as e:
        logger.error(f"{mode} failed: {e}", exc_info=True)
        console.print(f"[bold red]An error occurred:[/bold red] {e}")
        raise typer.Exit(code=1)
    finally:
        settings.quadrature_tol = previous_tol

    if result.error is not None:
        console.print(f"[bold red]{result.error['code']}:[/bold red] {result.error['message']}")
    _print_summary(result)
    raise typer.Exit(code=result.exit_code)


@app.command()
def simulate(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    quadrature_tol: Optional[float] = TolOption,
):
    """
    Simulate principal truncation paths X(m, n).
    """
    _execute("simulate", config, seed, out, quadrature_tol)


@app.command()
def diagnose(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    quadrature_tol: Optional[float] = TolOption,
):
    """
    Check the simulation assumptions and write report.json.
    """
    _execute("diagnose", config, seed, out, quadrature_tol)


@app.command()
def validate(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    quadrature_tol: Optional[float] = TolOption,
):
    """
    Simulate and compare the paths with the characteristic function oracle.
    """
    _execute("validate", config, seed, out, quadrature_tol)


@app.command()
def qband(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    quadrature_tol: Optional[float] = TolOption,
):
    """
    Sample the small-jump band Q(m, M) and test it for normality.
    """
    _execute("qband", config, seed, out, quadrature_tol)


@app.command()
def rband(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    quadrature_tol: Optional[float] = TolOption,
):
    """
    Sample the time-truncation residual R over band.outer minus trunc.window.
    """
    _execute("rband", config, seed, out, quadrature_tol)


@app.command()
def refine(
    config: Path = ConfigOption,
    seed: Optional[int] = SeedOption,
    out: Optional[Path] = OutOption,
    quadrature_tol: Optional[float] = TolOption,
):
    """
    Simulate principal paths with the Gaussian small-jump refinement.
    """
    _execute("refine", config, seed, out, quadrature_tol)


if __name__ == "__main__":
    app()
