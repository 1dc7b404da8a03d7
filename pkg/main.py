import argparse
import json
import logging
import os
import sys

import numpy as np

from core.config import PRESETS, load_config, preset_config, save_config
from core.errors import ConfigError
from core.runner import ExperimentRunner

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact Gaussian-mixture simulation of bred GKP cluster states")
    parser.add_argument('--threads', type=int, default=None, help="worker threads (grid points or term chunks)")
    parser.add_argument('--deterministic', action='store_true', help="fixed chunking and pairwise reduction")
    parser.add_argument('--seed', type=int, default=None, help="seed for sampled outcome grids")
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help="run an experiment config")
    run.add_argument('config', help="path to a JSON experiment file")
    run.add_argument('--out', default=None, help="results directory (overrides config output)")

    validate = sub.add_parser('validate', help="dry-run report for a config")
    validate.add_argument('config', help="path to a JSON experiment file")

    preset = sub.add_parser('preset', help="run a built-in preset")
    preset.add_argument('name', choices=sorted(PRESETS))
    preset.add_argument('--out', default=None, help="results directory")
    return parser


def _run(runner: ExperimentRunner, cfg, logger: logging.Logger) -> int:
    result = runner.run(cfg)
    logger.info(f"Saved {len(result.files)} tables and {result.manifest}")
    if not result.ok:
        logger.warning(f"{result.n_failures} grid rows failed; see the error column")
        return EXIT_PARTIAL
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    # Налаштування логування
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    logger = logging.getLogger(__name__)

    if args.seed is not None:
        np.random.seed(args.seed)
    runner = ExperimentRunner(results_dir=getattr(args, 'out', None), threads=args.threads,
                              deterministic=args.deterministic or None)
    try:
        if args.command == 'preset':
            cfg = preset_config(args.name, output=args.out or os.path.join('results', args.name))
        else:
            cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed

        if args.command == 'validate':
            report = runner.validate(cfg)
            print(json.dumps(report, indent=2, sort_keys=True))
            return EXIT_OK

        code = _run(runner, cfg, logger)
        if args.command == 'preset':
            save_config(cfg, os.path.join(cfg.output, 'config.json'))
        return code
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return EXIT_CONFIG
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
