from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    """
    Класс конфигурации приложения.
    Загружает и валидирует переменные окружения
    и файл .env
    """
    model_config = SettingsConfigDict(
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore',
        populate_by_name=True,
    )

    debug: bool = Field(default=True, alias='BPSMOOTH_DEBUG')
    log_level: str = Field(default='INFO', alias='BPSMOOTH_LOG_LEVEL')
    database_url: str = Field(default='sqlite:///bpsmooth.db', alias='BPSMOOTH_DATABASE_URL')
    store_results: bool = Field(default=False, alias='BPSMOOTH_STORE_RESULTS')
    tree_node_cap: int = Field(default=10_000_000, gt=0, alias='BPSMOOTH_TREE_NODE_CAP')
    matching_edge_cap: int = Field(default=36, gt=0, alias='BPSMOOTH_MATCHING_EDGE_CAP')
    flow_enumeration_cap: int = Field(default=1_000_000, gt=0, alias='BPSMOOTH_FLOW_ENUMERATION_CAP')
    tie_tolerance: float = Field(default=1e-12, ge=0, alias='BPSMOOTH_TIE_TOLERANCE')
    batch_size: int = Field(default=8192, gt=0, alias='BPSMOOTH_BATCH_SIZE')
    workers: int = Field(default=1, gt=0, alias='BPSMOOTH_WORKERS')

settings = Settings()
