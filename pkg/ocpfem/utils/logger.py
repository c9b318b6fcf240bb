# -*- coding: utf-8 -*-
"""
@description: shared logger of the ocpfem package
"""
import logging

LOG_FORMAT = '[%(levelname)7s %(asctime)s %(module)s:%(lineno)4d] %(message)s'


def get_logger(name, log_file=None, log_level='DEBUG'):
    """
    logger
    :param name: module name
    :param log_file: log file, stdout only if None
    :param log_level: log level
    :return:
    """
    logger = logging.getLogger(name)
    logger.setLevel(log_level.upper())
    formatter = logging.Formatter(LOG_FORMAT, datefmt='%Y%m%d %I:%M:%S')
    if log_file:
        f_handle = logging.FileHandler(log_file)
        f_handle.setFormatter(formatter)
        logger.addHandler(f_handle)
    if not any(type(h) is logging.StreamHandler for h in logger.handlers):
        handle = logging.StreamHandler()
        handle.setFormatter(formatter)
        logger.addHandler(handle)
    return logger


logger = get_logger('ocpfem', log_file=None, log_level='INFO')


def set_log_level(log_level='INFO'):
    logger.setLevel(log_level.upper())


def add_log_file(log_file):
    """Attach a file handler to the package logger."""
    get_logger('ocpfem', log_file=log_file, log_level=logging.getLevelName(logger.level))
