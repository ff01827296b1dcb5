from ascents.cli import main

main()
