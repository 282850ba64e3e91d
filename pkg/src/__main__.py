from src.certify import main

main()
