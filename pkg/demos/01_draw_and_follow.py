"""
Draw a light path, let the robot follow it
==========================================

The light plane turns a mouse-drawn waypoint list into lit grid cells;
the robot bound to that color channel walks the waypoints and keeps a
log of every one it reaches.
"""

from lumilab import (
    ColorChannel,
    LightField,
    RobotState,
    assign_path,
    plan_path,
    rasterize_path,
    route_report,
    run,
    step,
    termination_bound,
)

# a hand-drawn stroke, already sampled to grid coordinates; note the
# repeated point the mouse produced while resting — plan_path drops it
stroke = [(0, 0), (0, 0), (40, 0), (40, 25), (10, 25)]
path = plan_path(ColorChannel.RED, stroke)
print("planned waypoints:", [tuple(w) for w in path.waypoints])

# project it onto the shared light field
field = LightField()
rasterize_path(path, field)
print("lit cells on RED:", field.lit_count(ColorChannel.RED))
print("lit cells on BLUE:", field.lit_count(ColorChannel.BLUE), "(other channel untouched)")

# bind a robot to the channel and let it run; one step() is one timer tick
robot = RobotState(channel=ColorChannel.RED)
assign_path(robot, field)
run(robot)

print("\ntick  position      heading")
while robot.running:
    step(robot)
    print(f"{robot.tick_count:3d}   {tuple(robot.pos)!s:12}  {robot.heading.value}")

print("\ncompleted in", robot.tick_count, "ticks")
print("predicted bound was   ", termination_bound(path))
print("route derivation:", [tuple(w) for w in route_report(robot)])
