# The virtual driver is an optional controller that retunes the speed
# every tick: sprint while the next waypoint is far (Manhattan distance
# over 100 cells), then relax back toward the 500 average when close.

from lumilab import (
    ColorChannel,
    LightField,
    RobotState,
    assign_path,
    plan_path,
    rasterize_path,
    run,
    step,
    virtual_driver,
)

field = LightField()
course = plan_path(ColorChannel.RED, [(0, 0), (500, 300), (520, 310)])
rasterize_path(course, field)

robot = RobotState(channel=ColorChannel.RED)
assign_path(robot, field)
run(robot)

print("tick  position      speed  interval_ms")
while robot.running:
    virtual_driver(robot, field)
    step(robot)
    if robot.tick_count % 10 == 0 or not robot.running:
        print(f"{robot.tick_count:4d}  {tuple(robot.pos)!s:12}  {robot.speed:4d}  {robot.tick_interval_ms:5d}")

print("\nfinished in", robot.tick_count, "ticks; final speed", robot.speed)
