import logging
import sys

from pydantic import ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


class SslError(Exception):
    pass


class InvalidArgumentError(SslError, ValueError):
    pass


class SingularSystemError(SslError):
    def __init__(self, message, indices=None, context=None):
        super().__init__(message)
        self.indices = list(indices or [])
        self.context = dict(context or {})

    def __str__(self):
        text = super().__str__()
        if self.indices:
            text += f" (disconnected unlabeled indices: {self.indices})"
        if self.context:
            details = ", ".join(f"{k}={v}" for k, v in self.context.items())
            text += f" [{details}]"
        return text


class NonConvergenceError(SslError):
    def __init__(self, message, last_iterate, final_change, iterations):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.final_change = final_change
        self.iterations = iterations


class EmptyNeighborhoodError(SslError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class RecordsIOError(SslError):
    def __init__(self, message, path):
        super().__init__(f"{message}: {path}")
        self.path = str(path)


class InputFileError(SslError):
    def __init__(self, message, path, line=None):
        where = f"{path}" if line is None else f"{path}, line {line}"
        super().__init__(f"{message} ({where})")
        self.path = str(path)
        self.line = line


class CustomExceptionsClass(Exception):
    def __init__(self, command, error):
        self.command = command
        self.error = error

    def exit_code(self):
        if isinstance(
            self.error,
            (SingularSystemError, NonConvergenceError, EmptyNeighborhoodError),
        ):
            return EXIT_NUMERICAL
        elif isinstance(
            self.error,
            (InvalidArgumentError, ValidationError, InputFileError, RecordsIOError),
        ):
            return EXIT_USAGE
        return None

    def handle(self):
        """
        Logs the error and turns it into the process exit status of the command.

        \n**return**: never returns; raises `SystemExit` with 1 for numerical failures and
        2 for usage or input errors. Errors of any other kind are re-raised untouched.
        """
        code = self.exit_code()
        if code is None:
            logger.error("%s: unexpected error %r", self.command, self.error)
            raise self.error
        logger.error("%s failed: %s", self.command, self.error)
        print(f"{self.command}: {self.error}", file=sys.stderr)
        raise SystemExit(code)
