import datetime as dt
import json
import logging
import sys
import traceback
from dataclasses import dataclass

import click
import pandas as pd

from . import __version__, catalog, detect, factorize, search
from .enumeration import Budget
from .exceptions import (
    BudgetExhausted,
    InstanceTooLargeError,
    NotInSpectrumError,
    PreconditionError,
    SequenceError,
)
from .sequence import Seq, parse_integers

LOG_LEVELS = ("ERROR", "WARNING", "INFO", "DEBUG")

REQUIRED_FLAGS = {
    "parse-check": ("k", "seq"),
    "detect": ("k", "t", "seq"),
    "spectrum": ("k", "seq"),
    "witness": ("k", "t", "seq"),
    "minimal": ("k",),
    "davenport": ("k",),
    "factorize": ("k", "seq"),
    "beta-factorize": ("beta", "seq"),
    "predict37": ("k", "t", "seq"),
    "finiteness": ("k", "t"),
    "bounds": ("k", "t"),
    "lemma30": ("k", "t"),
    "family": ("k", "t", "x"),
    "sprime": ("k", "t"),
    "verify": ("k", "t", "seq"),
}


class UsageFailure(click.ClickException):
    exit_code = 2


class BudgetFailure(click.ClickException):
    exit_code = 3


@dataclass
class RunConfig:
    command: str
    k: int = None
    t: int = None
    seq: str = None
    beta: int = None
    x: int = None
    length: int = None
    budget_seconds: int = 7200
    budget_nodes: int = 10**10
    threads: int = 1
    format: str = "json"
    strict: bool = False
    loglevel: str = "warning"
    logfile: str = ""

    def validate(self):
        for name in REQUIRED_FLAGS[self.command]:
            if getattr(self, name) is None:
                flag = "--" + name.replace("_", "-")
                raise click.UsageError(f"{self.command} requires {flag}")
        positive = ("k", "t", "beta", "x", "length", "threads")
        positive += ("budget_seconds", "budget_nodes")
        for name in positive:
            value = getattr(self, name)
            if value is not None and value < 1:
                flag = "--" + name.replace("_", "-")
                raise click.UsageError(f"{flag} must be a positive integer")
        if self.loglevel.upper() not in LOG_LEVELS:
            raise click.UsageError("loglevel must be one of " + ", ".join(LOG_LEVELS))

    @property
    def budget(self):
        return Budget(seconds=self.budget_seconds, nodes=self.budget_nodes)


class Logging:
    def __init__(self):
        self.logger = logging.getLogger("zerosum")
        self.stderr_handler = logging.StreamHandler()
        self.logger.addHandler(self.stderr_handler)

    def setup_logger(self, config):
        self.logger.setLevel(config.loglevel.upper())
        if config.logfile:
            self.logger.removeHandler(self.stderr_handler)
            self.logger.addHandler(logging.FileHandler(config.logfile))

    def teardown(self):
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

    def log_start_of_execution(self, command):
        now = dt.datetime.today().isoformat()
        self.logger.info(f"Starting zerosum {command}, {now}")

    def log_end_of_execution(self, command):
        now = dt.datetime.today().isoformat()
        self.logger.info(f"Finished zerosum {command}, {now}")


def _profile_as_dict(prof):
    return {
        "L": sorted(prof.L),
        "alpha": prof.alpha,
        "n": {str(length): prof.n[length] for length in sorted(prof.n)},
    }


class ZeroSum:
    def __init__(self, config):
        self.config = config
        self.logging_system = Logging()

    def run(self):
        config = self.config
        logger = self.logging_system.logger
        try:
            config.validate()
            self.logging_system.setup_logger(config)
            self.logging_system.log_start_of_execution(config.command)
            result = self._dispatch()
            self._emit(result)
            self.logging_system.log_end_of_execution(config.command)
        except click.ClickException:
            raise
        except (
            SequenceError,
            PreconditionError,
            NotInSpectrumError,
            InstanceTooLargeError,
        ) as e:
            logger.error(str(e))
            raise UsageFailure(str(e))
        except BudgetExhausted as e:
            logger.error(str(e))
            self._emit(self._partial_result(e))
            raise BudgetFailure(str(e))
        except Exception as e:
            logger.error(str(e))
            logger.debug(traceback.format_exc())
            raise click.ClickException(str(e))
        finally:
            self.logging_system.teardown()

    def _dispatch(self):
        method = getattr(self, "_cmd_" + self.config.command.replace("-", "_"))
        return method()

    def _seq(self):
        return Seq.parse(self.config.seq, self.config.k)

    def _emit(self, result):
        if self.config.format == "table":
            click.echo(_as_table(result))
        else:
            click.echo(json.dumps(result, indent=2))

    def _partial_result(self, e):
        return {
            "kind": "partial",
            "k": self.config.k,
            "t": self.config.t,
            "value": None,
            "extremal": None,
            "verified_upper": max(e.verified_lengths, default=None),
            "verified_lengths": list(e.verified_lengths),
            "divisor": None,
            "stats": e.stats.as_dict() if e.stats is not None else {},
        }

    def _cmd_parse_check(self):
        seq = self._seq()
        return {
            "k": seq.k,
            "seq": seq.format(),
            "length": seq.length,
            "sum": seq.sum,
            "zero_sum": seq.is_zero_sum(),
            "canonical": seq.canonicalize_sign().format(),
        }

    def _cmd_detect(self):
        seq = self._seq()
        contains = detect.contains_length(seq, self.config.t)
        found = detect.witness(seq, self.config.t).sub.format() if contains else None
        return {"contains": contains, "witness": found}

    def _cmd_spectrum(self):
        result = detect.spectrum(self._seq())
        return {"n": result.n, "lengths": result.lengths}

    def _cmd_witness(self):
        found = detect.witness(self._seq(), self.config.t)
        return {"t": found.target_length, "witness": found.sub.format()}

    def _cmd_minimal(self):
        if self.config.seq is not None:
            seq = self._seq()
            return {"seq": seq.format(), "minimal": catalog.is_minimal(seq)}
        if self.config.length is None:
            raise click.UsageError("minimal requires --seq or --length")
        seqs = catalog.enumerate_minimal(self.config.k, self.config.length)
        return {
            "k": self.config.k,
            "length": self.config.length,
            "count": len(seqs),
            "sequences": [seq.format() for seq in seqs],
        }

    def _cmd_davenport(self):
        result = catalog.davenport(self.config.k, cap=self.config.length)
        return {
            "k": result.k,
            "value": result.value,
            "witness": result.witness.format(),
            "cap": result.cap,
            "verified_empty": list(result.verified_empty),
        }

    def _cmd_factorize(self):
        factorization = factorize.factorize_minimal(self._seq())
        return {
            "parts": [part.format() for part in factorization.parts],
            "profile": _profile_as_dict(factorization.profile()),
        }

    def _cmd_beta_factorize(self):
        result = factorize.beta_factorize(
            parse_integers(self.config.seq), self.config.beta
        )
        return {
            "beta": result.beta,
            "X0": list(result.X0),
            "parts": [list(part) for part in result.parts],
        }

    def _cmd_predict37(self):
        seq = self._seq()
        prediction = factorize.analyze37(seq, self.config.t, strict=self.config.strict)
        return {
            "predicted": prediction.predicted,
            "beta": prediction.beta,
            "bound": prediction.bound,
            "length": seq.length,
            "profile": _profile_as_dict(prediction.profile),
        }

    def _cmd_finiteness(self):
        is_finite, divisor = search.finiteness(self.config.k, self.config.t)
        return {
            "finite": is_finite,
            "divisor": divisor,
            "lcm": search.lcm_bound(self.config.k),
        }

    def _cmd_bounds(self):
        lower, upper = search.bounds(self.config.k, self.config.t)
        return {"lower": lower, "upper": upper}

    def _cmd_lemma30(self):
        s, r = search.lemma30_witnesses(self.config.k, self.config.t)
        return {"S": s.format(), "R": r.format(), "length": s.length}

    def _cmd_family(self):
        config = self.config
        block = search.family_block(config.k, config.t)
        seq = search.infinite_family(config.k, config.t, config.x)
        return {
            "divisor": block.divisor,
            "block": block.block.format(),
            "sequence": seq.format(),
            "length": seq.length,
        }

    def _cmd_sprime(self):
        config = self.config
        outcome, stats = search.sprime(
            config.k, config.t, budget=config.budget, threads=config.threads
        )
        result = outcome.as_dict()
        result["stats"] = stats.as_dict()
        return result

    def _cmd_verify(self):
        seq = self._seq()
        return search.verify_construction(seq, self.config.t).as_dict()


def _cell(value):
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return "" if value is None else str(value)


def _as_table(result):
    flat = {}
    for key, value in result.items():
        if isinstance(value, dict):
            for subkey, subvalue in value.items():
                flat[f"{key}.{subkey}"] = _cell(subvalue)
        else:
            flat[key] = _cell(value)
    return pd.Series(flat, dtype=object).to_string()


def common_options(function):
    options = [
        click.option("--k", type=int, help="Half-width of the interval [-k, k]"),
        click.option("--t", type=int, help="Target subsequence length"),
        click.option("--seq", help='Sequence, e.g. "3^2,-2^3"'),
        click.option("--beta", type=int),
        click.option("--x", type=int, help="Number of block copies"),
        click.option("--length", type=int),
        click.option("--budget-seconds", type=int, default=7200, show_default=True),
        click.option("--budget-nodes", type=int, default=10**10, show_default=True),
        click.option("--threads", type=int, default=1, show_default=True),
        click.option("--strict", is_flag=True, default=False),
        click.option(
            "--format",
            "format_",
            type=click.Choice(["json", "table"]),
            default="json",
            show_default=True,
        ),
        click.option("--loglevel", default="warning", show_default=True),
        click.option("--logfile", default=""),
    ]
    for option in reversed(options):
        function = option(function)
    return function


def _add_command(name, help_text):
    @common_options
    def command(format_, **kwargs):
        ZeroSum(RunConfig(command=name, format=format_, **kwargs)).run()

    main.command(name=name, help=help_text)(command)


@click.group()
@click.version_option(version=__version__, prog_name="zerosum")
def main():
    """Zero-sum sequences over [-k, k] and the constants s'_t(I_k)"""


COMMANDS = (
    ("parse-check", "Parse a sequence and report its length and sum"),
    ("detect", "Whether a zero-sum subsequence of length t exists"),
    ("spectrum", "All lengths of zero-sum subsequences"),
    ("witness", "A zero-sum subsequence of length t"),
    ("minimal", "Test minimality (--seq) or list minimal sequences (--length)"),
    ("davenport", "Davenport constant of [-k, k]; --length sets the cap"),
    ("factorize", "Factorize into minimal zero-sum parts"),
    ("beta-factorize", "Split integers into parts with sums divisible by beta"),
    ("predict37", "Predict a length-t zero-sum subsequence from a profile"),
    ("finiteness", "Whether s'_t(I_k) is finite"),
    ("bounds", "Lower and upper bounds for s'_t(I_k)"),
    ("lemma30", "Long zero-sum sequences avoiding length t"),
    ("family", "Unbounded family avoiding length t, x copies of its block"),
    ("sprime", "Exact s'_t(I_k) with an extremal witness"),
    ("verify", "Check that a sequence is zero-sum and avoids length t"),
)

for _name, _help in COMMANDS:
    _add_command(_name, _help)


if __name__ == "__main__":
    sys.exit(main())
