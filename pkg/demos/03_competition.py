"""
Two-robot competition with simulated stopwatches
================================================

Both robots get the same route. Each tick adds the robot's current
tick interval to its stopwatch, so the faster robot (larger speed,
smaller interval) accumulates less simulated time over the same tick
count and wins.
"""

from lumilab import ColorChannel, plan_path, run_match, termination_bound

course = [(0, 0), (60, 0), (60, 40), (20, 40), (20, 10)]
ticks = termination_bound(plan_path(ColorChannel.RED, course))
print("course:", course)
print("both robots need", ticks, "ticks to finish\n")

for red_speed, blue_speed in ((900, 100), (100, 900), (640, 640)):
    result = run_match(course, course, red_speed, blue_speed)
    print(f"RED at {red_speed}, BLUE at {blue_speed}:")
    print(f"  RED  stopwatch {result.red.elapsed_ms:6d} ms")
    print(f"  BLUE stopwatch {result.blue.elapsed_ms:6d} ms")
    print(f"  winner: {result.winner_name}\n")

# a robot with no route never finishes; the opponent wins by completion
walkover = run_match(course, [], red_speed=500, blue_speed=500)
print("BLUE never drew a route ->", walkover.winner_name, "wins by completion")
