import logging

MAX_DEGREE = 12                     # Default truncation degree for graded computations.
GROUP_CAP = 2**16                   # Default cap on |G(Q)| for exhaustive group scans.
EFFECTIVE_CAP = 24                  # Effectiveness enumerates all 2^m points of W.
P_CHECK_CAP = 12                    # Eq. P(Q(w),w') system enumerates all 4^m pairs.
BETTI_ORDER_CAP = 64                # Largest group handed to the resolution oracle.
BETTI_DEGREE_CAP = 5                # Highest Betti number computed by default.

LOG_FORMAT = '%(name)-8s  %(levelname)-8s %(asctime)s.%(msecs)03d  :    %(message)s'
TIME_STAMP_FORMAT = '%d-%m-%y %H:%M:%S'
formatter = logging.Formatter(LOG_FORMAT, TIME_STAMP_FORMAT)

logger = logging.getLogger('BQ-Tool')
stream_h = logging.StreamHandler()
stream_h.setFormatter(formatter)
logger.addHandler(stream_h)
logger.setLevel(logging.INFO)


class CapExceeded(Exception):
    """Raised when an exhaustive computation would exceed a configured cap."""
    pass


def check_cap(value, cap, what):
    """Raises CapExceeded if `value` exceeds `cap`.
    :param value int: requested size.
    :param cap int: configured maximum.
    :param what str: description used in the error message.
    :raises CapExceeded: if value > cap.
    """
    if value > cap:
        raise CapExceeded('{} is {} which exceeds the cap of {}'.format(what, value, cap))


def add_log_file(fname):
    """Attaches a file handler writing the package log to `fname`."""
    file_h = logging.FileHandler(fname, mode='w')
    file_h.setFormatter(formatter)
    logger.addHandler(file_h)
    return file_h
