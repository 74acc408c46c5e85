"""
Speed slider limits and vocal orders
====================================
"""

from lumilab import (
    ColorChannel,
    LabError,
    LightField,
    RobotState,
    assign_path,
    plan_path,
    rasterize_path,
    set_speed,
    voice_command,
)

field = LightField()
rasterize_path(plan_path(ColorChannel.RED, [(0, 0), (50, 0)]), field)
robot = RobotState(channel=ColorChannel.RED)
assign_path(robot, field)

# the timer interval is the complement of the speed: interval = 1000 - speed
for speed in (100, 500, 999):
    set_speed(robot, speed)
    print(f"speed {speed:3d} -> tick every {robot.tick_interval_ms} ms")

# both ends of the slider are hard limits; the robot stops and complains
for speed in (1000, 0):
    try:
        set_speed(robot, speed)
    except LabError as err:
        print(f"speed {speed:4d} -> {err.code}: {err.message}")

# vocal orders are exact words; the robot answers back
print()
for word in ("OK", "OK", "Finish", "Finish", "please stop"):
    robot, reply = voice_command(robot, word)
    state = "running" if robot.running else "stopped"
    print(f"say {word!r:14} -> robot {state:7}  reply: {reply.text!r}")
