from .experiment import ExperimentResult, SceneResult, run_experiment, run_scene

__all__ = ["ExperimentResult", "SceneResult", "run_experiment", "run_scene"]
