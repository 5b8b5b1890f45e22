from src.cli.acceptance import CheckResult, run_acceptance
from src.cli.config import dump_config, load_config, parse_config
from src.cli.runner import load_record, replay, run, run_directory, save_record
