# Точка входа decay-lab: python src/main.py <команда> [параметры]
from cli import main

if __name__ == "__main__":
    main()
