"""lumilab: a simulated robotic remote laboratory with a split control plane.

The light plane plans and projects color-channel routes, the robot plane
drives the simulated robots, the reservation authority guards lab access,
and the gateway routes a JSON-lines wire protocol between them with
per-plane failure isolation.
"""

from .errors import LabError
from .gateway import Connection, Gateway, Message, ServerStatus, decode, encode
from .harness import (
    MatchResult,
    RobotOutcome,
    ScenarioScript,
    load_path_file,
    load_script,
    parse_script,
    run_match,
    run_script,
)
from .lightplane import (
    GRID_H,
    GRID_W,
    MAX_WAYPOINTS,
    ColorChannel,
    LightField,
    Path,
    Waypoint,
    bresenham_line,
    clear_channel,
    plan_path,
    query_cell,
    query_channel_path,
    rasterize_path,
)
from .reservation import (
    ControlCommand,
    EventLog,
    Pin,
    Privilege,
    ReservationAuthority,
    Scenario,
    Session,
    SessionState,
    SimClock,
    UserRecord,
    apply_match_result,
    eligible_as_coach,
    replay_user_records,
    replicate_to_slaves,
    tie_break,
    training_plan_stub,
)
from .robotplane import (
    Heading,
    RobotState,
    VoiceReply,
    assign_path,
    route_report,
    run,
    set_speed,
    step,
    stop,
    termination_bound,
    virtual_driver,
    voice_command,
)

__version__ = "0.1.0"
