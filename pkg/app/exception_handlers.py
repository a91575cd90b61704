"""Exception handlers for the command-line application."""

import logging

from pydantic import ValidationError

from app.domain.exceptions import DomainException, VerificationError

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_ASSERTION_FAILED = 1
EXIT_INPUT_ERROR = 2


def exit_code_for(exc: BaseException) -> int:
    """Map an exception raised by a command to its process exit code."""
    if isinstance(exc, VerificationError):
        logger.error(f"Verification failed: {str(exc)}")
        return EXIT_ASSERTION_FAILED

    if isinstance(exc, DomainException):
        logger.error(f"Domain error: {str(exc)}", exc_info=True)
        return EXIT_INPUT_ERROR

    if isinstance(exc, (ValueError, ValidationError)):
        logger.error(f"Invalid input: {str(exc)}", exc_info=True)
        return EXIT_INPUT_ERROR

    raise exc
