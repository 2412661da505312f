from fairst.models.AdamState import AdamState
from fairst.models.ArchConfig import ArchConfig
from fairst.models.DemandTensor import DemandTensor
from fairst.models.DemographicField import DemographicField
from fairst.models.EvalReport import AttributeReport, EvalReport
from fairst.models.FairnessConfig import AttributeSpec, FairnessConfig
from fairst.models.FeatureStack2D import FeatureStack2D
from fairst.models.GapReport import GapReport
from fairst.models.GridSpec import BoundingBox, GridSpec
from fairst.models.GroupLabeling import GroupLabeling
from fairst.models.ModelParams import ModelParams
from fairst.models.RunConfig import FeatureSource, RunConfig
from fairst.models.SeriesStack1D import SeriesStack1D
from fairst.models.TemporalSlice import TemporalSlice
from fairst.models.TrainConfig import TrainConfig
from fairst.models.TrainLog import TrainLog
from fairst.models.TripRecord import TripRecord

__all__ = ["AdamState", "ArchConfig", "DemandTensor", "DemographicField", "AttributeReport",
           "EvalReport", "AttributeSpec", "FairnessConfig", "FeatureStack2D", "GapReport",
           "BoundingBox", "GridSpec", "GroupLabeling", "ModelParams", "FeatureSource", "RunConfig", "SeriesStack1D",
           "TemporalSlice", "TrainConfig", "TrainLog", "TripRecord"]
