"""f451 System Identification module."""

__version__ = "0.1.0"
__app_name__ = "f451-sysid"
