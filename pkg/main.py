#!/usr/bin/env python3
"""
Main Entry Point for the Discrepancy Laboratory
Command-line front end; stdout carries CSV/JSON, logs go to stderr and logs/disclab.log
"""

import logging
import sys

from config import Config
from src.cli.dispatch import EXIT_FAILED, dispatch


# Setup logging
def setup_logging(config: Config):
    """Setup logging configuration"""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(config.LOGS_DIR / 'disclab.log'),
            logging.StreamHandler()
        ]
    )


logger = logging.getLogger(__name__)


def main():
    """Main entry point"""
    config = Config()
    setup_logging(config)

    try:
        code = dispatch(sys.argv[1:], config)
    except KeyboardInterrupt:
        logger.info("Run interrupted by user")
        code = EXIT_FAILED
    except Exception as e:
        logger.error(f"Application error: {e}")
        code = EXIT_FAILED
    sys.exit(code)


if __name__ == "__main__":
    main()
