"""
Failure isolation between the two control planes
================================================

Path planning lives on its own server plane, separate from the rest of
robot control. Killing one plane fails only that plane's commands; the
demo drives the gateway exactly the way a network client would, one
JSON line per request.
"""

import json

from lumilab import Gateway, Message, SimClock, encode

gw = Gateway(clock=SimClock(0.0), seed=9)
conn = gw.connect()


def send(kind, **payload):
    reply = json.loads(gw.handle_line(conn, encode(Message.request(send.seq, kind, **payload))))
    send.seq += 1
    verdict = "ok" if reply["ok"] else reply["error"]
    print(f"  {kind:12} -> {verdict}")
    return reply


send.seq = 1

# set up: reserve, log in, draw a red route
reserved = send("RESERVE", scenario="S1", party=["ali"], start=0, duration=60)
send("LOGIN", session=1, code=reserved["result"]["pins"][0]["code"])
send("DRAW_PATH", channel="RED", points=[[0, 0], [30, 0]])

print("\n--- light plane goes down ---")
gw.set_server_status("light", False)
send("DRAW_PATH", channel="RED", points=[[0, 0], [5, 5]])  # the path activity fails...
send("SET_SPEED", robot="RED", value=700)                  # ...every other activity survives
send("RUN", robot="RED")
send("TICK", n=4)
send("ROUTE_REPORT", robot="RED")
send("STATUS")

print("\n--- light restored, robot plane goes down instead ---")
gw.set_server_status("light", True)
gw.set_server_status("robot", False)
send("RUN", robot="RED")
send("DRAW_PATH", channel="BLUE", points=[[0, 10], [30, 10]])
send("RESERVE", scenario="S1", party=["badr"], start=7200, duration=30)

print("\n--- both planes down: only the gateway-local commands answer ---")
gw.set_server_status("light", False)
status = send("STATUS")
print("  reported flags:", status["result"])
