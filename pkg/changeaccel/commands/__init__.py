"""Command-line subcommands."""

from changeaccel.commands import dp_calibrate, evaluate, frontier, metrics, table2

COMMANDS = (metrics, evaluate, dp_calibrate, table2, frontier)
