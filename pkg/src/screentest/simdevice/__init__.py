"""Simulated device and declarative app definitions used as the test bed."""

from screentest.simdevice.device import (
    Device,
    DeviceAction,
    DeviceError,
    Observation,
    ObservationKind,
)
from screentest.simdevice.loader import (
    BUNDLED_APPS,
    AppDefinitionError,
    bundled_app,
    fault_catalog,
    load_app,
    load_app_source,
)
from screentest.simdevice.model import (
    ActionKind,
    FaultSpec,
    SimApp,
    UnknownFaultError,
    inject_all,
    inject_fault,
    revert_fault,
)

__all__ = [
    "BUNDLED_APPS",
    "ActionKind",
    "AppDefinitionError",
    "Device",
    "DeviceAction",
    "DeviceError",
    "FaultSpec",
    "Observation",
    "ObservationKind",
    "SimApp",
    "UnknownFaultError",
    "bundled_app",
    "fault_catalog",
    "inject_all",
    "inject_fault",
    "load_app",
    "load_app_source",
    "revert_fault",
]
