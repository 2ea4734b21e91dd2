"""Command-line interface.

Thin client over the HTTP service: by default requests are served in-process
(no socket), and ``--server URL`` points the same commands at a running
instance, so output is identical either way.

Exit codes: 0 success, 1 verification failure, 2 no negative eigenvalue,
3 solver failure (no bracket / step failure), 64 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_NO_EIGENVALUE = 2
EXIT_SOLVER_FAILED = 3
EXIT_USAGE = 64

CSV_COLUMNS = [
    "p",
    "n",
    "alpha",
    "R",
    "lambda1",
    "bracket_lo",
    "bracket_hi",
    "g_residual",
    "iterations",
    "status",
]

_STATUS_EXIT = {
    "ok": EXIT_OK,
    "no_negative_eigenvalue": EXIT_NO_EIGENVALUE,
    "no_bracket": EXIT_SOLVER_FAILED,
    "step_failure": EXIT_SOLVER_FAILED,
}


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _post(server: str | None, path: str, payload: dict) -> dict:
    with _client(server) as client:
        resp = client.post(path, json=payload)
        if resp.status_code != 200:
            click.echo(f"server error {resp.status_code}: {resp.text}", err=True)
            raise SystemExit(EXIT_SOLVER_FAILED)
        return resp.json()


@click.group()
def main() -> None:
    """Exterior-ball Robin eigenvalue tools."""


_solver_options = [
    click.option("--p", "p", type=float, required=True, help="p-Laplacian exponent (> 1)"),
    click.option("--n", "n", type=int, required=True, help="space dimension"),
    click.option("--alpha", type=float, required=True, help="Robin parameter (negative binds)"),
    click.option("--R", "R", type=float, default=1.0, show_default=True, help="ball radius"),
    click.option("--r-max-factor", type=float, default=30.0, show_default=True),
    click.option("--ode-rel-tol", type=float, default=1e-10, show_default=True),
    click.option("--lambda-tol", type=float, default=1e-9, show_default=True),
]


def _add_options(opts):
    def wrap(f):
        for opt in reversed(opts):
            f = opt(f)
        return f

    return wrap


@main.command()
@_add_options(_solver_options)
@click.option("--server", default=None, help="base URL of a running service")
def solve(p, n, alpha, R, r_max_factor, ode_rel_tol, lambda_tol, server) -> None:
    """Solve one eigenvalue problem; prints a JSON record."""
    record = _post(
        server,
        "/solve",
        {
            "p": p,
            "n": n,
            "alpha": alpha,
            "R": R,
            "r_max_factor": r_max_factor,
            "ode_rel_tol": ode_rel_tol,
            "lambda_tol": lambda_tol,
        },
    )
    click.echo(json.dumps(record, indent=2, sort_keys=True))
    if record["status"] != "ok":
        click.echo(f"solver status: {record['status']}: {record['detail']}", err=True)
    raise SystemExit(_STATUS_EXIT.get(record["status"], EXIT_SOLVER_FAILED))


@main.command()
@click.option("--variable", type=click.Choice(["alpha", "R", "p"]), required=True)
@click.option("--values", required=True, help="comma-separated list of grid values")
@click.option("--p", "p", type=float, default=2.0, show_default=True)
@click.option("--n", "n", type=int, default=3, show_default=True)
@click.option("--alpha", type=float, default=-2.0, show_default=True)
@click.option("--R", "R", type=float, default=1.0, show_default=True)
@click.option("--output", type=click.Path(dir_okay=False, writable=True), default=None,
              help="CSV output path (default: stdout)")
@click.option("--server", default=None, help="base URL of a running service")
def sweep(variable, values, p, n, alpha, R, output, server) -> None:
    """Sweep one variable over a grid; emits one CSV row per grid point.

    Rows appear in input order; partial failures are recorded per row and the
    exit code is 0 as long as any row succeeded.
    """
    try:
        grid = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        click.echo(f"bad --values: {exc}", err=True)
        raise SystemExit(EXIT_USAGE)
    if not grid:
        click.echo("empty grid", err=True)
        raise SystemExit(EXIT_USAGE)

    fixed = {"p": p, "n": n, "alpha": alpha, "R": R}
    points = []
    for v in grid:
        point = dict(fixed)
        point[variable] = int(v) if variable == "n" else v
        points.append(point)

    data = _post(server, "/sweep", {"points": points})

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in data["results"]:
        writer.writerow({col: rec.get(col, "") for col in CSV_COLUMNS})
    text = buf.getvalue()
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)

    if not any(rec["status"] == "ok" for rec in data["results"]):
        worst = data["results"][0]["status"]
        raise SystemExit(_STATUS_EXIT.get(worst, EXIT_SOLVER_FAILED))
    raise SystemExit(EXIT_OK)


@main.command()
@click.argument("check_id", default="all")
@click.option("--server", default=None, help="base URL of a running service")
def verify(check_id, server) -> None:
    """Run one named property check, or "all"; prints a JSON report."""
    from .verify import CHECKS

    if check_id != "all" and check_id not in CHECKS:
        click.echo(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECKS))}", err=True)
        raise SystemExit(EXIT_USAGE)
    data = _post(server, "/verify", {"check_id": check_id})
    click.echo(json.dumps(data, indent=2, sort_keys=True))
    if not data["passed"]:
        for rep in data["reports"]:
            if not rep["passed"]:
                for out in rep["outcomes"]:
                    if not out["passed"]:
                        click.echo(
                            f"FAILED {rep['check_id']} at {out['point']}: "
                            f"margin {out['margin']:.3g} {out['detail']}",
                            err=True,
                        )
        raise SystemExit(EXIT_VERIFY_FAILED)
    raise SystemExit(EXIT_OK)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("robinext.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
