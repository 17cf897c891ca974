"""
``python -m decolite <command> [flags]`` entry point.

Each subcommand is the management command of the same name; this module only
routes argv to it and turns its outcome into a process exit code.
"""
import logging
import sys

from django.core.management import load_command_class
from django.core.management.base import CommandError, handle_default_options

logger = logging.getLogger(__name__)

PROG = "decolite"
APP = "decolite.experiments"
COMMANDS = ("train", "ensemble", "evaluate", "mcm", "diversity", "smoke")


def usage():
    return "usage: {0} {{{1}}} [flags]\n       {0} <command> --help".format(PROG, ",".join(COMMANDS))


def dispatch(argv, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    if not argv or argv[0] not in COMMANDS:
        if argv and argv[0] not in ("-h", "--help"):
            stderr.write("unknown command: {0}\n".format(argv[0]))
        stderr.write(usage() + "\n")
        return 0 if argv and argv[0] in ("-h", "--help") else 1

    name = argv[0]
    command = load_command_class(APP, name)
    parser = command.create_parser(PROG, name)
    try:
        options = parser.parse_args(argv[1:])
    except CommandError as error:
        stderr.write("{0}\n\n{1}".format(error, parser.format_help()))
        return 1
    except SystemExit as exit_:
        # --help
        return exit_.code or 0

    cmd_options = vars(options)
    args = cmd_options.pop("args", ())
    handle_default_options(options)
    if stdout is not None:
        cmd_options["stdout"] = stdout
    cmd_options["stderr"] = stderr
    try:
        command.execute(*args, **cmd_options)
    except CommandError as error:
        stderr.write("{0}\n".format(error))
        return error.returncode
    return 0


def main():
    sys.exit(dispatch(sys.argv[1:]))
