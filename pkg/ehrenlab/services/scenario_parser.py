"""
Scenario documents (TOML) and the committed preset fixtures
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from functools import partial
from importlib import resources
from typing import Dict, List, Optional

from ehrenlab.config import BaseConfig
from ehrenlab.exceptions import (
    ScenarioValidationError, StabilityError, StateError, UnknownPresetError
)
from ehrenlab.models.dynamics import (
    DensityFunctionalModel, DoebnerGoldinModel, Kernel, KernelShape, LinearModel, ModelKind
)
from ehrenlab.models.grid import Grid
from ehrenlab.models.potentials import (
    DensityCoupledPotential, GaussianBarrier, HarmonicPotential, PotentialKind,
    UniformPotential, ZeroPotential
)
from ehrenlab.models.scenario import (
    OutputSpec, Scenario, Scheme, StateKind, StateSpec, StepperConfig
)
from ehrenlab.services.dynamics import Dynamics
from ehrenlab.services.integrators import check_stability
from ehrenlab.services.states import initial_state
from ehrenlab.utils.validation import ParameterValidator

logger = logging.getLogger(__name__)

PRESET_PACKAGE = 'ehrenlab.presets'

TOP_LEVEL_KEYS = ('preset', 'name', 'grid', 'state', 'model', 'potential', 'stepper', 'output')

GRID_KEYS = ('n', 'length')
STEPPER_KEYS = ('scheme', 'dt', 't_final', 'sample_every')
OUTPUT_KEYS = ('csv',)

STATE_KEYS = {
    StateKind.GAUSSIAN: ('x0', 'sigma', 'k0', 'chirp', 'cubic_phase'),
    StateKind.PLANE_WAVE: ('mode',),
}

MODEL_KEYS = {
    ModelKind.LINEAR: ('mass',),
    ModelKind.DENSITY_FUNCTIONAL: ('mass', 'g', 'exponent', 'kernel', 'kernel_width'),
    ModelKind.DOEBNER_GOLDIN: ('mass', 'lambda', 'epsilon'),
}

POTENTIAL_KEYS = {
    PotentialKind.ZERO: (),
    PotentialKind.HARMONIC: ('omega', 'center'),
    PotentialKind.UNIFORM: ('f0',),
    PotentialKind.GAUSSIAN_BARRIER: ('height', 'width', 'center'),
    PotentialKind.DENSITY_COUPLED: ('eta', 'base'),
}

KERNEL_CHOICES = ('none',) + tuple(shape.value for shape in KernelShape)

_MISSING = object()


# ================================
# PRESET FIXTURES
# ================================

def available_presets() -> List[str]:
    """Names of the committed preset documents"""
    names = []
    for entry in resources.files(PRESET_PACKAGE).iterdir():
        if entry.name.endswith('.toml'):
            names.append(entry.name[:-len('.toml')])
    return sorted(names)


def preset_text(name: str) -> str:
    """Raw TOML of a preset; UnknownPresetError lists the alternatives"""
    available = available_presets()
    if name not in available:
        raise UnknownPresetError(name, available)
    return resources.files(PRESET_PACKAGE).joinpath(f'{name}.toml').read_text(encoding='utf-8')


def load_preset(name: str) -> Scenario:
    return parse_scenario(preset_text(name))


def _merge(base: dict, override: dict) -> dict:
    """Section-wise override; a section that changes its kind replaces the base section"""
    merged = {k: (dict(v) if isinstance(v, dict) else v) for k, v in base.items()}
    for key, value in override.items():
        current = merged.get(key)
        if isinstance(value, dict) and isinstance(current, dict):
            if 'kind' in value and value['kind'] != current.get('kind'):
                merged[key] = dict(value)
            else:
                merged[key] = _merge(current, value)
        else:
            merged[key] = value
    return merged


# ================================
# PARSER
# ================================

class ScenarioParser:
    """Validate a scenario document, collecting every error before raising"""

    def __init__(self):
        self.errors = []

    def parse(self, text: str) -> Scenario:
        self.errors = []
        document = self._load(text, 'document')
        if document is None:
            raise ScenarioValidationError(self.errors)

        preset = document.get('preset')
        if preset is not None:
            if not isinstance(preset, str):
                self.errors.append(f"preset must be a string (got {preset!r})")
            else:
                try:
                    base = self._load(preset_text(preset), f"preset '{preset}'")
                except UnknownPresetError as e:
                    self.errors.append(str(e))
                    base = None
                if base is not None:
                    document = _merge(base, {k: v for k, v in document.items() if k != 'preset'})

        self._check_keys('', document, TOP_LEVEL_KEYS)
        for section in ('grid', 'state', 'model', 'stepper'):
            if section not in document:
                self.errors.append(f"missing required section [{section}]")

        name = document.get('name', preset if isinstance(preset, str) else 'scenario')
        if not isinstance(name, str):
            self.errors.append(f"name must be a string (got {name!r})")
            name = 'scenario'

        grid = self._build_grid(self._section(document, 'grid'))
        state = self._build_state(self._section(document, 'state'), grid)
        model = self._build_model(self._section(document, 'model'))
        potential = self._build_potential(self._section(document, 'potential'), 'potential', grid)
        stepper = self._build_stepper(self._section(document, 'stepper'))
        output = self._build_output(self._section(document, 'output'))

        if model is not None and not model.is_lagrangian and stepper is not None \
                and stepper.scheme is Scheme.SPLIT_STEP:
            self.errors.append(
                f"model.kind '{model.kind.value}' cannot be paired with stepper.scheme 'split_step': "
                "the current term is not a multiplier in either basis (use 'rk4')"
            )

        if None not in (grid, state, model, potential, stepper):
            self._check_stability(grid, state, model, potential, stepper)

        if self.errors:
            raise ScenarioValidationError(self.errors)

        scenario = Scenario(grid=grid, state=state, model=model, potential=potential,
                            stepper=stepper, output=output, name=name)
        logger.debug(f"Parsed scenario '{name}' ({scenario.descriptor_hash[:12]})")
        return scenario

    # ---------- helpers ----------

    def _load(self, text: str, label: str) -> Optional[dict]:
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            self.errors.append(f"{label} is not valid TOML: {e}")
            return None

    def _section(self, document: dict, name: str) -> Optional[dict]:
        section = document.get(name, _MISSING)
        if section is _MISSING:
            return None
        if not isinstance(section, dict):
            self.errors.append(f"[{name}] must be a table (got {section!r})")
            return None
        return section

    def _check_keys(self, path: str, table: dict, allowed):
        for key in table:
            if key not in allowed:
                where = f"{path}.{key}" if path else key
                self.errors.append(f"unknown key '{where}' (allowed: {', '.join(sorted(allowed))})")

    def _number(self, table: dict, path: str, key: str, default=_MISSING, integer: bool = False):
        value = table.get(key, default)
        if value is _MISSING:
            self.errors.append(f"missing required key '{path}.{key}'")
            return None
        if integer:
            if not ParameterValidator.is_integer(value):
                self.errors.append(f"{path}.{key} must be an integer (got {value!r})")
                return None
            return int(value)
        if not ParameterValidator.is_finite(value):
            self.errors.append(f"{path}.{key} must be a finite number (got {value!r})")
            return None
        return float(value)

    def _kind(self, table: dict, path: str, enum_type, default=_MISSING):
        value = table.get('kind', default)
        if value is _MISSING:
            self.errors.append(f"missing required key '{path}.kind'")
            return None
        try:
            return enum_type(value)
        except ValueError:
            choices = ', '.join(k.value for k in enum_type)
            self.errors.append(f"{path}.kind '{value}' is not one of: {choices}")
            return None

    def _build(self, path: str, factory, **kwargs):
        if any(v is None for v in kwargs.values()):
            return None
        try:
            return factory(**kwargs)
        except ValueError as e:
            self.errors.append(f"[{path}] {e}")
            return None

    # ---------- sections ----------

    def _build_grid(self, table: Optional[dict]) -> Optional[Grid]:
        if table is None:
            return None
        self._check_keys('grid', table, GRID_KEYS)
        n = self._number(table, 'grid', 'n', integer=True)
        length = self._number(table, 'grid', 'length')
        return self._build('grid', Grid, n=n, length=length)

    def _build_state(self, table: Optional[dict], grid: Optional[Grid]) -> Optional[StateSpec]:
        if table is None:
            return None
        kind = self._kind(table, 'state', StateKind)
        if kind is None:
            return None
        self._check_keys('state', table, ('kind',) + STATE_KEYS[kind])
        params = {}
        if kind is StateKind.PLANE_WAVE:
            params['mode'] = self._number(table, 'state', 'mode', 0, integer=True)
        else:
            center = grid.length / 2 if grid is not None else 0.0
            defaults = {'x0': center, 'sigma': 1.0, 'k0': 0.0, 'chirp': 0.0, 'cubic_phase': 0.0}
            for key, default in defaults.items():
                params[key] = self._number(table, 'state', key, default)
        if any(v is None for v in params.values()):
            return None
        spec = StateSpec(kind, params)
        if grid is not None:
            try:
                initial_state(spec, grid)
            except StateError as e:
                self.errors.append(f"[state] {e}")
                return None
        return spec

    def _build_model(self, table: Optional[dict]):
        if table is None:
            return None
        kind = self._kind(table, 'model', ModelKind)
        if kind is None:
            return None
        self._check_keys('model', table, ('kind',) + MODEL_KEYS[kind])
        mass = self._number(table, 'model', 'mass', 1.0)

        if kind is ModelKind.LINEAR:
            return self._build('model', LinearModel, mass=mass)

        if kind is ModelKind.DOEBNER_GOLDIN:
            return self._build('model', DoebnerGoldinModel, mass=mass,
                               coupling=self._number(table, 'model', 'lambda', 0.0),
                               epsilon=self._number(table, 'model', 'epsilon', BaseConfig.NODE_EPSILON))

        kernel_name = table.get('kernel', 'none')
        kernel = None
        if kernel_name not in KERNEL_CHOICES:
            self.errors.append(f"model.kernel '{kernel_name}' is not one of: {', '.join(KERNEL_CHOICES)}")
            return None
        width = self._number(table, 'model', 'kernel_width', 1.0)
        if kernel_name != 'none':
            kernel = self._build('model', Kernel, shape=KernelShape(kernel_name), width=width)
            if kernel is None:
                return None
        elif 'kernel_width' in table:
            self.errors.append("model.kernel_width given without a kernel")
        g = self._number(table, 'model', 'g', 1.0)
        exponent = self._number(table, 'model', 'exponent', 1.0)
        if None in (mass, g, exponent):
            return None
        return self._build('model', partial(DensityFunctionalModel, kernel=kernel),
                           mass=mass, g=g, exponent=exponent)

    def _build_potential(self, table: Optional[dict], path: str, grid: Optional[Grid],
                         nested: bool = False):
        if table is None:
            if nested:
                self.errors.append(f"missing required table [{path}]")
                return None
            return ZeroPotential()
        kind = self._kind(table, path, PotentialKind, 'zero')
        if kind is None:
            return None
        self._check_keys(path, table, ('kind',) + POTENTIAL_KEYS[kind])
        center = grid.length / 2 if grid is not None else 0.0

        if kind is PotentialKind.ZERO:
            return ZeroPotential()
        if kind is PotentialKind.HARMONIC:
            return self._build(path, HarmonicPotential,
                               omega=self._number(table, path, 'omega'),
                               center=self._number(table, path, 'center', center))
        if kind is PotentialKind.UNIFORM:
            return self._build(path, UniformPotential, f0=self._number(table, path, 'f0'))
        if kind is PotentialKind.GAUSSIAN_BARRIER:
            return self._build(path, GaussianBarrier,
                               height=self._number(table, path, 'height'),
                               width=self._number(table, path, 'width'),
                               center=self._number(table, path, 'center', center))

        # density_coupled
        if nested:
            self.errors.append(f"{path}: density_coupled potentials cannot be nested")
            return None
        eta = self._number(table, path, 'eta')
        base_table = table.get('base')
        if base_table is not None and not isinstance(base_table, dict):
            self.errors.append(f"[{path}.base] must be a table")
            return None
        base = self._build_potential(base_table, f'{path}.base', grid, nested=True)
        return self._build(path, DensityCoupledPotential, base=base, eta=eta)

    def _build_stepper(self, table: Optional[dict]) -> Optional[StepperConfig]:
        if table is None:
            return None
        self._check_keys('stepper', table, STEPPER_KEYS)
        scheme_name = table.get('scheme', Scheme.RK4.value)
        try:
            scheme = Scheme(scheme_name)
        except ValueError:
            self.errors.append(f"stepper.scheme '{scheme_name}' is not one of: "
                               f"{', '.join(s.value for s in Scheme)}")
            scheme = None
        dt = self._number(table, 'stepper', 'dt')
        t_final = self._number(table, 'stepper', 't_final')
        sample_every = self._number(table, 'stepper', 'sample_every', 1, integer=True)
        return self._build('stepper', StepperConfig, dt=dt, t_final=t_final,
                           scheme=scheme, sample_every=sample_every)

    def _build_output(self, table: Optional[dict]) -> OutputSpec:
        if table is None:
            return OutputSpec()
        self._check_keys('output', table, OUTPUT_KEYS)
        csv_name = table.get('csv', OutputSpec.csv)
        if not isinstance(csv_name, str) or not csv_name:
            self.errors.append(f"output.csv must be a non-empty string (got {csv_name!r})")
            return OutputSpec()
        return OutputSpec(csv=csv_name)

    def _check_stability(self, grid, state, model, potential, stepper):
        if stepper.scheme is not Scheme.RK4:
            return
        try:
            psi = initial_state(state, grid)
            check_stability(Dynamics(model, grid, potential), psi.values, stepper.dt)
        except StabilityError as e:
            self.errors.append(f"stepper.dt: {e}")
        except ValueError as e:
            self.errors.append(f"[stepper] {e}")


def parse_scenario(text: str) -> Scenario:
    """Validated Scenario, or ScenarioValidationError carrying every error"""
    return ScenarioParser().parse(text)


def scenario_schema() -> Dict[str, List[str]]:
    """Documented keys per section, for --help"""
    return {
        'top level': ['preset', 'name'],
        'grid': list(GRID_KEYS),
        'state (gaussian)': list(STATE_KEYS[StateKind.GAUSSIAN]),
        'state (plane_wave)': list(STATE_KEYS[StateKind.PLANE_WAVE]),
        **{f'model ({k.value})': list(v) for k, v in MODEL_KEYS.items()},
        **{f'potential ({k.value})': list(v) for k, v in POTENTIAL_KEYS.items() if v},
        'stepper': list(STEPPER_KEYS),
        'output': list(OUTPUT_KEYS),
    }
