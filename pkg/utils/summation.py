import numpy as np


def neumaier_sum(values, axis=-1):
    """Neumaier's improved Kahan summation along ``axis``.

    Works on whole arrays at once: the loop runs over the summation axis and
    every other axis is carried along as a vector, so one call sums the
    series of many arguments.

    :param values: array of addends
    :param axis: axis to reduce
    :return: compensated sums, shape of ``values`` without ``axis``
    """
    values = np.moveaxis(np.asarray(values, dtype=float), axis, 0)
    total = np.zeros(values.shape[1:])
    compensation = np.zeros(values.shape[1:])
    for val in values:
        t = total + val
        big = np.abs(total) >= np.abs(val)
        compensation += np.where(big, (total - t) + val, (val - t) + total)
        total = t
    return total + compensation
