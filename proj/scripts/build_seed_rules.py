"""Builds data/seed_rules.tsv, the seed knowledge base.

The original 228-entry seed is not published. This is a reconstruction:
one rule per tuple of the appendix half-proof rows, one per desk store
tuple, and hand-written everyday rules to reach the same size.
"""

from common import DATA, PRE, NEGATION, read_tsv, split_command

TARGET = 228

EVERYDAY = """\
it rains|the ground gets wet
it rains|I need an umbrella
I carry an umbrella|I stay dry
I forget my umbrella|I get wet
it is cold outside|I feel cold
I wear a coat|I stay warm
I turn on the heater|the room gets warm
the room is too warm|I open a window
I open the window|fresh air comes in
I close the window|the room stays warm
the sun is out|it is bright outside
it is sunny|I wear sunglasses
I wear sunscreen|I avoid sunburn
it is windy|leaves fall from trees
it snows|the roads are slippery
the roads are slippery|driving takes longer
driving takes longer|I leave home earlier
I leave home earlier|I arrive on time
my alarm rings|I wake up
I wake up late|I miss the bus
I miss the bus|I walk to work
I set an alarm|I wake up on time
I sleep eight hours|I feel rested
I feel rested|I work well
I drink coffee|I feel awake
I skip breakfast|I get hungry before lunch
I get hungry|I eat a snack
I eat vegetables|I stay healthy
I cook dinner|the kitchen smells good
I wash the dishes|the kitchen is clean
I take out the trash|the house smells fresh
I do the laundry|I have clean clothes
I hang the laundry outside|the clothes dry in the sun
I iron my shirt|I look neat
I water the plants|the plants grow
the plants get sunlight|the plants stay green
I plant seeds in spring|flowers bloom in summer
I mow the lawn|the yard looks tidy
I feed the cat|the cat stops meowing
I walk the dog|the dog is happy
the dog barks|someone is at the door
the doorbell rings|I open the door
a package arrives|I sign for it
I order groceries online|groceries are delivered
I make a shopping list|I remember what to buy
I buy groceries|I can cook dinner
the fridge is empty|I go shopping
I pay with a card|I get a receipt
I check my bank account|I know my balance
I pay my bills on time|I avoid late fees
I save money each month|I can afford a trip
I compare prices|I find a better deal
a store has a sale|prices are lower
I get a raise|I have more money
I spend too much|my savings shrink
I budget carefully|I spend less
I check my calendar|I know my schedule
I have a meeting|I prepare slides
I prepare slides|the meeting goes well
I take notes in the meeting|I remember the decisions
I send the agenda|people come prepared
I reply to emails|people get answers quickly
my inbox is full|I archive old emails
I get an urgent email|I read it right away
I read the news|I know what is happening
I read a book|I learn something new
I study for the exam|I pass the exam
I practice every day|I get better
I take a break|I feel refreshed
I stretch|my back feels better
I go to the gym|I get stronger
I go for a run|my heart gets stronger
I exercise regularly|I stay fit
I drink water|I stay hydrated
I feel sick|I see a doctor
I take my medicine|I get better soon
I forget my pills|I feel worse
I wash my hands|I avoid germs
I brush my teeth|my teeth stay healthy
I go to bed early|I wake up early
I use my phone in bed|I fall asleep late
my phone battery is low|I charge my phone
I charge my phone|my phone works all day
I lose my keys|I cannot open the door
I keep my keys in one place|I find them quickly
I lock the door|the house is safe
I leave the lights on|the electricity bill goes up
I turn off the lights|I save energy
I unplug devices|I save power
the car is low on gas|I stop at a gas station
I fill the tank|I can drive far
I check the tire pressure|the car drives safely
there is traffic|the commute takes longer
I take the train|I avoid traffic
I ride a bike|I get exercise
I walk to the store|I get fresh air
my flight is delayed|I wait at the airport
I pack the night before|I leave on time
I check in online|I skip the line
I book a hotel early|I get a cheaper room
I call my friend|my friend feels remembered
I send a birthday card|my friend feels happy
I forget a birthday|my friend feels sad
I help my neighbor|my neighbor is grateful
I donate clothes|someone in need gets warm clothes
I volunteer|the community benefits
I listen carefully|I understand better
I ask questions|I learn faster
I write things down|I forget less
I make a to do list|I finish more tasks
I finish my tasks early|I have free time
I have free time|I relax
I relax|I feel less stressed
I work too late|I feel tired
I feel tired|I make mistakes
I meditate|I feel calm
I listen to music|my mood improves
I watch a movie|I have fun
I play a game|I have fun
I back up my files|I do not lose data
I update my software|my computer is safer
I use a strong password|my account is safer
my computer is slow|I restart it
I print the tickets|I have them at the gate
I arrive early|I get a good seat
I read the reviews|I pick a good restaurant
I reserve a table|we do not wait
I bring a gift|the host is pleased
I clean my desk|I can focus
"""


def main():
    rules = []
    for part, row, score, r1, r2, o1, o2, command in read_tsv(DATA / "appendix" / "half_proofs.tsv"):
        _, action, goal = split_command(command)
        rules.append((action, o1) if r1 not in PRE else (o1, action))
        rules.append((goal, o2) if r2 not in PRE else (o2, goal))
    for subject, relation, obj, _ in read_tsv(DATA / "desk" / "store.tsv"):
        if relation in NEGATION:
            continue
        rules.append((obj, subject) if relation in PRE else (subject, obj))
    everyday = [line.split("|") for line in EVERYDAY.strip().splitlines()]
    need = TARGET - len(rules)
    assert need <= len(everyday), f"need {need} everyday rules, have {len(everyday)}"
    rules.extend(everyday[:need])

    out = ["# Seed knowledge base (reconstruction, see scripts/build_seed_rules.py)"]
    for seq, (condition, consequence) in enumerate(rules, start=1):
        out.append(f"{seq}\tSeed\t-\t{condition}\t{consequence}")
    (DATA / "seed_rules.tsv").write_text("\n".join(out) + "\n")
    print(f"{len(rules)} rules ({need} everyday)")


if __name__ == "__main__":
    main()
