from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from bpsmooth.core.config import settings

engine = create_engine(
    settings.database_url,
    future=True
)

SessionLocal = sessionmaker(
    engine,
    expire_on_commit=False,
)
