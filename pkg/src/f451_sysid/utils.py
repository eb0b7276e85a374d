"""Utility functions for f451 System Identification module.

This module includes several functions that are used throughout the
f451 System Identification module to handle common tasks like processing
config values, deriving trial seeds, and formatting numbers for output
files.
"""
from configparser import ConfigParser
from configparser import ExtendedInterpolation
from typing import Any
from typing import Dict
from typing import List

import numpy as np

__all__ = [
    "convert_attrib_str_to_list",
    "convert_str_to_bool",
    "convert_config_str_to_dict",
    "process_config",
    "mix_seed",
    "fmt_float",
]



def convert_attrib_str_to_list(
    inStr: Any, itemDelim: str = "|", itemFmt: Any = str
) -> List[Any]:
    """Convert a given attribute string to list format.

    This method is used to convert multi-value config strings (e.g. a grid
    of sample sizes) to list format. By default, the output will be a list of
    strings. But the 'itemFmt' function can convert the output to a list of
    any type. Lists and tuples are accepted as-is and only formatted.

    Example:
        >>> myList = convert_attrib_str_to_list("500|1000|2000", "|", int)
        >>> assert myList == [500, 1000, 2000]

        >>> myList = convert_attrib_str_to_list([500, "1000"], "|", int)
        >>> assert myList == [500, 1000]

        >>> myList = convert_attrib_str_to_list(5)
        >>> assert myList == ["5"]

    Args:
        inStr:
            configuration string (or list) to be converted.
        itemDelim:
            item delimiter
        itemFmt:
            item (data) formatter

    Returns:
        List with zero or more attribute values
    """
    if isinstance(inStr, (list, tuple)):
        tmpList = [str(item) for item in inStr]
    else:
        tmpList = str(inStr).strip("[]").replace(",", itemDelim).split(itemDelim)

    return [itemFmt(item.strip()) for item in tmpList if item.strip()]


def convert_str_to_bool(inVal: Any) -> bool:
    """Convert string value to boolean.

    Example:
        >>> assert convert_str_to_bool("TRUE")
        >>> assert convert_str_to_bool("yes")
        >>> assert not convert_str_to_bool("no")

    Args:
        inVal:
            Value to be converted.

    Returns:
        Boolean 'True' or 'False' based on input.
    """
    return (
        inVal
        if isinstance(inVal, bool)
        else str(inVal).lower() in {"true", "1", "t", "y", "yes"}
    )


def convert_config_str_to_dict(
    inStr: str, sectnDelim: str = "|", itemDelim: str = ",", keyDelim: str = ":"
) -> Dict[str, Any]:
    """Convert 'config' string to dict format.

    Config strings are handy for overriding a few settings on the command line
    (e.g. ``f451_sysid|n:3,tau:4``).

    Note:
        This technique should only be used to represent a single section.

    Example:
        >>> myDict = convert_config_str_to_dict("f451_sysid|n:3,tau:4")
        >>> assert myDict == {"f451_sysid": {"n": "3", "tau": "4"}}

    Args:
        inStr:
            configuration string to be converted
        sectnDelim:
            section delimiter
        itemDelim:
            item delimiter
        keyDelim:
            key delimiter

    Returns:
        Configuration values in dict format

    Raises:
        ValueError: String has no section, or section label is missing,
            or there are no section items
    """
    inStrParts = inStr.split(sectnDelim, 1)
    if len(inStrParts) < 2:
        raise ValueError(f"'{inStr}' is not a valid configuration string.")

    sectnLbl = str(inStrParts[0]).strip()
    if not sectnLbl:
        raise ValueError("Section label for configuration string cannot be empty.")

    sectnItems = str(inStrParts[1]).strip()
    if not sectnItems:
        raise ValueError("Section items for configuration string cannot be empty.")

    return {
        sectnLbl: {
            k.strip(): v.strip()
            for k, v in (
                str(item).split(keyDelim, 1)
                for item in str(sectnItems).split(itemDelim)
            )
        }
    }


def process_config(inConfig: Any, force: bool = True) -> ConfigParser:
    """Process config data into a ConfigParser object.

    Nested ``dict`` values are flattened to strings, and list values are
    joined with the standard '|' delimiter, so JSON documents and INI files
    end up in the same shape.

    Args:
        inConfig:
            config string, 'dict' with sections, or ConfigParser object
        force:
            raise exception on unknown types, else return empty parser

    Returns:
        Config parser object

    Raises:
        ValueError: Invalid config data source
    """
    if isinstance(inConfig, str):
        outConfig = ConfigParser(interpolation=ExtendedInterpolation())
        outConfig.optionxform = str  # type: ignore[assignment,method-assign]
        outConfig.read_dict(convert_config_str_to_dict(inConfig))
    elif isinstance(inConfig, dict):
        outConfig = ConfigParser(interpolation=ExtendedInterpolation())
        outConfig.optionxform = str  # type: ignore[assignment,method-assign]
        outConfig.read_dict(
            {
                sctn: {key: _stringify(val) for key, val in items.items()}
                for sctn, items in inConfig.items()
            }
        )
    elif isinstance(inConfig, ConfigParser):
        outConfig = inConfig
    elif force:
        raise ValueError(
            f"'{type(inConfig)}' is not a valid type for configuration data sets."
        )
    else:
        outConfig = ConfigParser()

    return outConfig


def _stringify(val: Any) -> str:
    if isinstance(val, (list, tuple)):
        return "|".join(str(item) for item in val)
    if val is None:
        return ""
    return str(val)


def mix_seed(masterSeed: int, *parts: int) -> int:
    """Derive a 64-bit seed from a master seed and a tuple of integers.

    The entropy pool of a numpy ``SeedSequence`` is built from the master
    seed and the parts, so every ``(T, trial_index)`` pair gets its own
    independent stream. The result is stable across platforms.

    Example:
        >>> assert mix_seed(1, 500, 0) == mix_seed(1, 500, 0)
        >>> assert mix_seed(1, 500, 0) != mix_seed(1, 500, 1)

    Args:
        masterSeed:
            master seed of the experiment
        parts:
            non-negative integers identifying the sub-stream (e.g. sample size, trial index)

    Returns:
        64-bit unsigned integer seed
    """
    seq = np.random.SeedSequence([int(masterSeed), *(int(part) for part in parts)])
    return int(seq.generate_state(1, np.uint64)[0])


def fmt_float(val: float) -> str:
    """Format float so that it can be read back without loss.

    Example:
        >>> assert float(fmt_float(0.1)) == 0.1

    Args:
        val:
            value to be formatted

    Returns:
        Shortest string that round-trips to the same 64-bit float
    """
    return repr(float(val))
