import logging
import logging.handlers
import datetime


# Handlers attached by the last `init_logger` call.
_handlers: list[logging.Handler] = []


def init_logger(logging_level: str = "info", filename: str | None = "nearfield.log"):
    """Configures the root logger by adding a `TimedRotatingFileHandler`
    connected to the log file `filename` and a `StreamHandler` that displays
    the log messages directly on screen. A new log file is started every
    midnight. If `filename` is `None`, only the stream handler is attached.
    Handlers attached by a previous call are detached and closed first.
    """
    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG)
    while _handlers:
        handler = _handlers.pop()
        logger.removeHandler(handler)
        handler.close()

    match logging_level.lower():
        case "debug":
            level = logging.DEBUG
        case "info":
            level = logging.INFO
        case "warning":
            level = logging.WARNING
        case "error":
            level = logging.ERROR
        case "critical":
            level = logging.CRITICAL
        case _:
            level = logging.DEBUG

    formatter = logging.Formatter(
        fmt="[%(name)s %(asctime)s | %(levelname)s] %(message)s",
        datefmt="%d-%m-%Y %H:%M:%S"
    )

    if filename:
        # noinspection PyTypeChecker
        file_handler = logging.handlers.TimedRotatingFileHandler(
            filename=filename,
            when='midnight',
            atTime=datetime.time(0, 0, 0)
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
        _handlers.append(file_handler)

    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(level)
    stream_handler.setFormatter(formatter)
    logger.addHandler(stream_handler)
    _handlers.append(stream_handler)
    return logger
