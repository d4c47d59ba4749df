import hashlib
import json
import os

from dataclasses import asdict, dataclass, field, fields, replace
from typing import Dict, List, Optional, Tuple

from jsonschema import Draft7Validator, validators
from singer import utils

from barrier_urns import distributions
from barrier_urns.distributions import BarrierSpec, ReinforcementSpec
from barrier_urns.errors import BarrierUrnsError, ConfigFileError, ConfigValidationError
from barrier_urns.random_streams import MAX_SEED

VERSION = '1.0.0'
THREADS_ENV_VAR = 'BARRIER_URNS_THREADS'

DEFAULT_CONTINUATIONS = 1000
DEFAULT_PATHS = 1000
DEFAULT_MASTER_SEED = 0

TERMINAL = 'terminal'
TAIL_AVERAGE = 'tail_average'


@dataclass(frozen=True)
class Thresholds:
    """Named tolerance set used by the suites"""
    cauchy_epsilon: float = 0.02
    cauchy_max_fraction: float = 0.01
    range_epsilon: float = 0.01
    interior_min: float = 0.0
    growth_tolerance: float = 0.02
    growth_min_fraction: float = 0.99
    ks_alpha: float = 0.01
    plug_in_alpha: float = 0.005
    clt_level: float = 0.05
    clt_min_pass_fraction: float = 0.8
    control_alpha: float = 0.001
    control_min_reject_fraction: float = 0.9
    barrier_delta: float = 0.01
    barrier_max_fraction: float = 0.02
    atom_bin_widths: Tuple[float, float] = (0.01, 0.001)
    atom_max_mass: float = 0.05
    cn_abs_tolerance: float = 0.05
    cn_min_fraction: float = 0.99
    variance_tolerance: float = 1e-9
    drift_tolerance: float = 0.01
    drift_min_fraction: float = 0.99
    identity_tolerance: float = 1e-12
    delta_mean_max_se: float = 5.0
    delta_bins: int = 10
    tv_max: float = 0.01
    plateau_tolerance: float = 0.05


@dataclass(frozen=True)
class LimitMethod:
    """How the unobservable limit Z is estimated from a path"""
    method: str = TERMINAL
    window: int = 1

    def to_dict(self) -> Dict:
        if self.method == TERMINAL:
            return {'method': TERMINAL}
        return {'method': self.method, 'window': self.window}


@dataclass(frozen=True)
class ExperimentConfig:
    b: float
    r: float
    barrier_spec: BarrierSpec
    reinforcement_spec: ReinforcementSpec
    horizon: int
    prefix_n: int
    continuations: int = DEFAULT_CONTINUATIONS
    paths: int = DEFAULT_PATHS
    master_seed: int = DEFAULT_MASTER_SEED
    thresholds: Thresholds = field(default_factory=Thresholds)
    limit_method: LimitMethod = field(default_factory=LimitMethod)
    red_reinforcement_spec: Optional[ReinforcementSpec] = None
    clt_variance_scale: float = 1.0
    runtime_budget_seconds: Optional[float] = None

    def to_dict(self) -> Dict:
        """Resolved config, defaults included, in config-file form"""
        resolved = {
            'b': self.b,
            'r': self.r,
            'barriers': self.barrier_spec.to_dict(),
            'reinforcement': self.reinforcement_spec.to_dict(),
            'horizon': self.horizon,
            'prefix_n': self.prefix_n,
            'continuations': self.continuations,
            'paths': self.paths,
            'master_seed': self.master_seed,
            'limit_method': self.limit_method.to_dict(),
            'clt_variance_scale': self.clt_variance_scale,
            'thresholds': {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self.thresholds).items()},
        }
        if self.red_reinforcement_spec is not None:
            resolved['red_reinforcement'] = self.red_reinforcement_spec.to_dict()
        if self.runtime_budget_seconds is not None:
            resolved['runtime_budget_seconds'] = self.runtime_budget_seconds

        return resolved

    def with_overrides(self, **overrides) -> 'ExperimentConfig':
        """Returns a copy with the non-None overrides applied and re-validated"""
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if not overrides:
            return self
        resolved = self.to_dict()
        resolved.update(overrides)
        # a shortened horizon falls back to the default prefix_n
        if 'prefix_n' not in overrides and resolved['prefix_n'] >= resolved['horizon']:
            del resolved['prefix_n']
        return config_from_dict(resolved)


def _number(minimum=None, exclusive_minimum=None, maximum=None):
    schema = {'type': 'number'}
    if minimum is not None:
        schema['minimum'] = minimum
    if exclusive_minimum is not None:
        schema['exclusiveMinimum'] = exclusive_minimum
    if maximum is not None:
        schema['maximum'] = maximum
    return schema


def _closed(properties: Dict, required: List[str]) -> Dict:
    return {'type': 'object', 'properties': properties, 'required': required, 'additionalProperties': False}


NON_NEGATIVE = _number(minimum=0)
POSITIVE = _number(exclusive_minimum=0)
UNIT = _number(minimum=0, maximum=1)
NUMBER_LIST = {'type': 'array', 'items': NON_NEGATIVE, 'minItems': 1}
PROBABILITY_LIST = {'type': 'array', 'items': UNIT, 'minItems': 1}

REINFORCEMENT_SCHEMAS = {
    'point_mass': _closed({'family': {}, 'value': NON_NEGATIVE, 'bound_c': POSITIVE}, ['family', 'value']),
    'discrete': _closed({'family': {}, 'values': NUMBER_LIST, 'probabilities': PROBABILITY_LIST,
                         'bound_c': POSITIVE},
                        ['family', 'values', 'probabilities']),
    'uniform': _closed({'family': {}, 'low': NON_NEGATIVE, 'high': NON_NEGATIVE, 'bound_c': POSITIVE},
                       ['family', 'low', 'high']),
    'scaled_beta': _closed({'family': {}, 'alpha': POSITIVE, 'beta': POSITIVE, 'c': POSITIVE},
                           ['family', 'alpha', 'beta', 'c']),
    'deterministic_sequence': _closed({'family': {},
                                       'values': {'type': 'array', 'items': NON_NEGATIVE},
                                       'level': NON_NEGATIVE,
                                       'decay': {'type': 'number'},
                                       'limit': _closed({'m': NON_NEGATIVE, 'q': NON_NEGATIVE}, ['m', 'q']),
                                       'bound_c': POSITIVE},
                                      ['family', 'level', 'limit']),
}

BARRIER_SCHEMAS = {
    'fixed': _closed({'family': {}, 'lower': UNIT, 'upper': UNIT}, ['family', 'lower', 'upper']),
    'independent_uniform_pair': _closed({'family': {}, 'low': UNIT, 'high': UNIT}, ['family']),
    'discrete_joint': _closed({'family': {},
                               'pairs': {'type': 'array',
                                         'items': {'type': 'array', 'items': UNIT, 'minItems': 2, 'maxItems': 2},
                                         'minItems': 1},
                               'probabilities': PROBABILITY_LIST},
                              ['family', 'pairs', 'probabilities']),
}

FAMILY_SCHEMA = {'type': 'object', 'properties': {'family': {'type': 'string'}}, 'required': ['family']}

THRESHOLD_SCHEMA = _closed({
    f.name: ({'type': 'array', 'items': POSITIVE, 'minItems': 2, 'maxItems': 2}
             if f.name == 'atom_bin_widths' else
             {'type': 'integer', 'minimum': 1} if f.name == 'delta_bins' else NON_NEGATIVE)
    for f in fields(Thresholds)}, [])

CONFIG_SCHEMA = _closed({
    'b': POSITIVE,
    'r': POSITIVE,
    'barriers': FAMILY_SCHEMA,
    'reinforcement': FAMILY_SCHEMA,
    'red_reinforcement': FAMILY_SCHEMA,
    'horizon': {'type': 'integer', 'minimum': 1},
    'prefix_n': {'type': 'integer', 'minimum': 1},
    'continuations': {'type': 'integer', 'minimum': 1},
    'paths': {'type': 'integer', 'minimum': 1},
    'master_seed': {'type': 'integer', 'minimum': 0, 'maximum': MAX_SEED},
    'limit_method': {'oneOf': [
        _closed({'method': {'const': TERMINAL}}, ['method']),
        _closed({'method': {'const': TAIL_AVERAGE}, 'window': {'type': 'integer', 'minimum': 1}},
                ['method', 'window']),
    ]},
    'clt_variance_scale': POSITIVE,
    'runtime_budget_seconds': POSITIVE,
    'thresholds': THRESHOLD_SCHEMA,
}, ['b', 'r', 'barriers', 'reinforcement', 'horizon'])


def _field_path(prefix: str, path) -> str:
    out = prefix
    for part in path:
        if isinstance(part, int):
            out += f'[{part}]'
        else:
            out = f'{out}.{part}' if out else str(part)
    return out


# integral floats such as 1000.0 are not integers here
StrictValidator = validators.extend(
    Draft7Validator,
    type_checker=Draft7Validator.TYPE_CHECKER.redefine(
        'integer', lambda checker, instance: isinstance(instance, int) and not isinstance(instance, bool)))


def _schema_errors(schema: Dict, instance, prefix: str = '') -> List[Tuple[str, str]]:
    validator = StrictValidator(schema)
    return [(_field_path(prefix, error.absolute_path), error.message)
            for error in sorted(validator.iter_errors(instance), key=lambda e: list(map(str, e.absolute_path)))]


def _family_errors(config: Dict, key: str, schemas: Dict) -> List[Tuple[str, str]]:
    family = config[key].get('family')
    if family not in schemas:
        return [(f'{key}.family', f"unknown family '{family}', expected one of {sorted(schemas)}")]
    return _schema_errors(schemas[family], config[key], key)


def validate_config(config: Dict) -> None:
    """
    Goes through the config document and validates its structure and constraints.
    Unknown keys are rejected.
    Args:
        config: dictionary loaded from the config file

    Returns: None
    Raises: ConfigValidationError with one (field path, message) entry per problem
    """
    errors = _schema_errors(CONFIG_SCHEMA, config)
    if errors:
        raise ConfigValidationError(errors)

    errors.extend(_family_errors(config, 'barriers', BARRIER_SCHEMAS))
    errors.extend(_family_errors(config, 'reinforcement', REINFORCEMENT_SCHEMAS))
    if 'red_reinforcement' in config:
        errors.extend(_family_errors(config, 'red_reinforcement', REINFORCEMENT_SCHEMAS))
    if errors:
        raise ConfigValidationError(errors)

    for key, build in (('barriers', distributions.barriers_from_dict),
                       ('reinforcement', distributions.reinforcement_from_dict),
                       ('red_reinforcement', distributions.reinforcement_from_dict)):
        if key in config:
            try:
                build(config[key])
            except BarrierUrnsError as exc:
                errors.append((key, str(exc)))

    horizon = config['horizon']
    if 'prefix_n' in config and config['prefix_n'] >= horizon:
        errors.append(('prefix_n', f'must be < horizon={horizon}'))

    window = config.get('limit_method', {}).get('window', 1)
    if window > horizon:
        errors.append(('limit_method.window', f'must be <= horizon={horizon}'))

    if errors:
        raise ConfigValidationError(errors)


def config_from_dict(config: Dict) -> ExperimentConfig:
    """
    Validates a config document and applies defaults
    Args:
        config: config dictionary

    Returns: ExperimentConfig
    Raises: ConfigValidationError
    """
    validate_config(config)

    limit = config.get('limit_method', {'method': TERMINAL})
    thresholds = dict(config.get('thresholds', {}))
    if 'atom_bin_widths' in thresholds:
        thresholds['atom_bin_widths'] = tuple(thresholds['atom_bin_widths'])

    red = config.get('red_reinforcement')

    return ExperimentConfig(
        b=config['b'],
        r=config['r'],
        barrier_spec=distributions.barriers_from_dict(config['barriers']),
        reinforcement_spec=distributions.reinforcement_from_dict(config['reinforcement']),
        red_reinforcement_spec=distributions.reinforcement_from_dict(red) if red is not None else None,
        horizon=config['horizon'],
        prefix_n=config.get('prefix_n', max(1, config['horizon'] // 100)),
        continuations=config.get('continuations', DEFAULT_CONTINUATIONS),
        paths=config.get('paths', DEFAULT_PATHS),
        master_seed=config.get('master_seed', DEFAULT_MASTER_SEED),
        thresholds=replace(Thresholds(), **thresholds),
        limit_method=LimitMethod(limit['method'], limit.get('window', 1)),
        clt_variance_scale=config.get('clt_variance_scale', 1.0),
        runtime_budget_seconds=config.get('runtime_budget_seconds'),
    )


def parse_config(path: str) -> ExperimentConfig:
    """
    Loads and validates an experiment config file (JSON)
    Args:
        path: path of the config file

    Returns: ExperimentConfig with defaults applied
    Raises: ConfigFileError if the file cannot be read or parsed, ConfigValidationError
    """
    try:
        document = utils.load_json(path)
    except (OSError, ValueError) as exc:
        raise ConfigFileError(path, exc) from exc

    return config_from_dict(document)


def canonical_json(document) -> str:
    return json.dumps(document, sort_keys=True, separators=(',', ':'))


def config_hash(config: ExperimentConfig) -> str:
    """sha256 of the canonical resolved config"""
    return hashlib.sha256(canonical_json(config.to_dict()).encode('utf-8')).hexdigest()


def default_threads(threads: Optional[int] = None) -> int:
    """--threads wins over the environment variable, which wins over the cpu count"""
    if threads:
        return max(1, int(threads))
    if os.environ.get(THREADS_ENV_VAR):
        return max(1, int(os.environ[THREADS_ENV_VAR]))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class RunManifest:
    config_path: str
    config: Dict
    master_seed: int
    command: str
    suites: Tuple[str, ...]
    output_dir: str
    version: str = VERSION

    @property
    def hash(self) -> str:
        """Covers everything that changes results; the output directory and thread count do not"""
        document = {'config': self.config,
                    'master_seed': self.master_seed,
                    'command': self.command,
                    'suites': list(self.suites),
                    'version': self.version}
        return hashlib.sha256(canonical_json(document).encode('utf-8')).hexdigest()

    def to_dict(self) -> Dict:
        return {'config_path': self.config_path,
                'config': self.config,
                'master_seed': self.master_seed,
                'command': self.command,
                'suites': list(self.suites),
                'output_dir': self.output_dir,
                'version': self.version,
                'config_hash': self.hash}
