"""
Command line entry point: loads the environment, pins BLAS threads, configures
logging and registers the fairst commands.
"""
import json
import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()

THREAD_VARIABLES = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def pin_threads(argv):
    """Apply --threads (or FAIRST_THREADS) before numpy loads its BLAS."""
    threads = os.getenv("FAIRST_THREADS")
    for i, arg in enumerate(argv):
        if arg == "--threads" and i + 1 < len(argv):
            threads = argv[i + 1]
        elif arg.startswith("--threads="):
            threads = arg.split("=", 1)[1]
    if threads:
        for name in THREAD_VARIABLES:
            os.environ[name] = str(threads)


pin_threads(sys.argv[1:])

import click  # noqa: E402

from fairst import __version__  # noqa: E402
from fairst.commands import setup_commands  # noqa: E402
from fairst.config import keys_help  # noqa: E402
from fairst.utils import DataError, FairSTException, NumericError  # noqa: E402

logging.basicConfig(
    level=os.getenv("FAIRST_LOG_LEVEL", "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


class FairSTGroup(click.Group):
    """Turns FairSTException into one JSON line on stderr and its exit code.

    I/O failures report as DATA_ERROR and arithmetic ones as NUMERIC_ERROR;
    anything else is an internal error and exits 1.
    """

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except FairSTException as error:
            self.report(ctx, error)
        except OSError as error:
            logger.exception(f"Error de E/S en {ctx.invoked_subcommand}")
            self.report(ctx, DataError(f"Error de entrada/salida: {error}", payload={"path": error.filename}))
        except ArithmeticError as error:
            logger.exception(f"Error aritmético en {ctx.invoked_subcommand}")
            self.report(ctx, NumericError(f"Error aritmético: {error}"))
        except Exception as error:
            logger.exception(f"Error inesperado en {ctx.invoked_subcommand}")
            click.echo(json.dumps({"code": FairSTException.code, "message": str(error)}), err=True)
            ctx.exit(1)

    def report(self, ctx, error):
        logger.error(f"Error en {ctx.invoked_subcommand}: {error.message}")
        click.echo(json.dumps(error.to_dict()), err=True)
        ctx.exit(error.exit_code)


@click.group(cls=FairSTGroup, epilog=keys_help())
@click.version_option(__version__)
@click.option("--verbose", is_flag=True, help="DEBUG logging.")
@click.option("--threads", type=int, default=None,
              help="BLAS threads; 1 gives the deterministic single-thread mode (also FAIRST_THREADS).")
def cli(verbose, threads):
    """fairst: fairness-aware spatiotemporal demand forecasting.

    Env: FAIRST_LOG_LEVEL, FAIRST_THREADS, FAIRST_OUTPUT_DIR (read from .env too).
    """
    if verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    if threads is not None and threads < 1:
        raise click.BadParameter("--threads debe ser >= 1")


setup_commands(cli)


def main():
    cli(prog_name="fairst")


if __name__ == "__main__":
    main()
